"""Seeded random generators for monomials and module elements.

All sampling is driven by an explicit ``random.Random`` so that every check
sweep is reproducible and reports are byte-identical for a fixed seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .ncpoly import GenSym, NCPoly, Word

COEFF_POOL = (
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(-1, 3),
    Fraction(3),
)


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_coeff(rng: random.Random) -> Fraction:
    return rng.choice(COEFF_POOL)


def random_word(rng: random.Random, gens: Sequence[GenSym], max_len: int, min_len: int = 1) -> Word:
    n = rng.randint(min_len, max_len)
    return Word(tuple(rng.choice(gens) for _ in range(n)))


def random_monomial(rng: random.Random, gens: Sequence[GenSym], max_len: int) -> NCPoly:
    return NCPoly.word(random_word(rng, gens, max_len))


def random_poly(
    rng: random.Random,
    gens: Sequence[GenSym],
    max_len: int,
    max_terms: int = 2,
    allow_unit: bool = False,
) -> NCPoly:
    out = NCPoly.zero()
    for _ in range(rng.randint(1, max_terms)):
        w = random_word(rng, gens, max_len, min_len=0 if allow_unit else 1)
        out = out + NCPoly.word(w, random_coeff(rng))
    return out


def random_module_word(
    rng: random.Random,
    a_gens: Sequence[GenSym],
    e_gens: Sequence[GenSym],
    max_affix: int = 1,
) -> Word:
    """A weight-1 word: an E-sort generator with A-sort words on both sides."""
    left = tuple(rng.choice(a_gens) for _ in range(rng.randint(0, max_affix))) if a_gens else ()
    right = tuple(rng.choice(a_gens) for _ in range(rng.randint(0, max_affix))) if a_gens else ()
    return Word(left + (rng.choice(e_gens),) + right)


def random_module_poly(
    rng: random.Random,
    a_gens: Sequence[GenSym],
    e_gens: Sequence[GenSym],
    max_affix: int = 1,
    max_terms: int = 2,
) -> NCPoly:
    out = NCPoly.zero()
    for _ in range(rng.randint(1, max_terms)):
        w = random_module_word(rng, a_gens, e_gens, max_affix)
        out = out + NCPoly.word(w, random_coeff(rng))
    return out


def random_jet_word(
    rng: random.Random,
    a_gens: Sequence[GenSym],
    e_gens: Sequence[GenSym],
    max_len: int = 2,
    max_jet: int = 1,
) -> Word:
    """A word in the free differential algebra, jets allowed on E-sort factors."""
    pool: list[GenSym] = list(a_gens)
    for e in e_gens:
        for k in range(max_jet + 1):
            pool.append(e.raised(k) if k else e)
    if not pool:
        return Word()
    n = rng.randint(1, max_len)
    return Word(tuple(rng.choice(pool) for _ in range(n)))


def random_jet_poly(
    rng: random.Random,
    a_gens: Sequence[GenSym],
    e_gens: Sequence[GenSym],
    max_len: int = 2,
    max_jet: int = 1,
    max_terms: int = 2,
) -> NCPoly:
    out = NCPoly.zero()
    for _ in range(rng.randint(1, max_terms)):
        w = random_jet_word(rng, a_gens, e_gens, max_len, max_jet)
        out = out + NCPoly.word(w, random_coeff(rng))
    return out
