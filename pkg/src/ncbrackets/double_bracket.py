"""Double brackets on a free associative algebra.

A double bracket is defined by its values on generator pairs and extends to
all of the algebra as a double derivation: by the outer Leibniz rule in the
second argument and the inner (1-jump) Leibniz rule in the first.  The unit
is killed in both slots.

Two symmetry conventions coexist: ``paper`` takes the bracket to be fixed by
the flip ``{{a,b}} = {{b,a}}^sigma``, ``vdb`` takes the usual antisymmetric
form ``{{a,b}} = -{{b,a}}^sigma``.  Both are exposed because the downstream
Poisson transport to matrix representations needs the antisymmetric one.

The double Jacobi identity is checked in two independently implemented
forms: the left/right extension form

    {{a,{{b,c}}}}_L = {{{{a,b}},c}}_L + {{b,{{a,c}}}}_R

and the cyclic three-term form

    0 = {{a,{{b,c}}}}_L + sigma_(123) {{b,{{c,a}}}}_L + sigma_(132) {{c,{{a,b}}}}_L,

which agree for antisymmetric brackets.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import MissingGeneratorError, SortError, WeightError
from .ncpoly import (
    A_SORT,
    SIGMA_123,
    SIGMA_132,
    SWAP,
    GenSym,
    NCPoly,
    TensorPoly,
    Word,
)
from .reports import Report
from .sampling import make_rng, random_monomial
from . import sampling

PAPER_CONVENTION = "paper"
VDB_CONVENTION = "vdb"


class DoubleBracketTable:
    """Generator-pair values of a double bracket on the A-sort subalgebra."""

    def __init__(self, gens: Sequence[GenSym], entries: Mapping[tuple[GenSym, GenSym], TensorPoly]):
        for g in gens:
            if g.sort != A_SORT or g.jet != 0:
                raise SortError(f"double bracket generators must be jet-0 A-sort, got {g}")
        self.gens = tuple(sorted(set(gens), key=GenSym.key))
        gen_set = set(self.gens)
        self._entries: dict[tuple[GenSym, GenSym], TensorPoly] = {}
        for (a, b), t in entries.items():
            if a not in gen_set or b not in gen_set:
                raise MissingGeneratorError(f"table entry ({a},{b}) uses undeclared generators")
            if t.rank != 2:
                raise SortError(f"table value for ({a},{b}) must have rank 2")
            bad = [s for s in t.symbols() if s.sort != A_SORT or s.jet > 0]
            if bad:
                raise SortError(f"table value for ({a},{b}) contains non-A symbols {bad}")
            if not t.is_zero:
                self._entries[(a, b)] = t

    def value(self, a: GenSym, b: GenSym) -> TensorPoly:
        if a not in self.gens or b not in self.gens:
            raise MissingGeneratorError(f"unknown generator in pair ({a},{b})")
        return self._entries.get((a, b), TensorPoly.zero(2))

    def items(self):
        return sorted(self._entries.items(), key=lambda kv: (kv[0][0].key(), kv[0][1].key()))


def _check_weight_zero(p: NCPoly, who: str) -> None:
    for w, _ in p.items():
        if w.weight != 0:
            raise WeightError(f"{who} must lie in the weight-0 subalgebra, got {w}")


def eval_bb(p: NCPoly, q: NCPoly, table: DoubleBracketTable) -> TensorPoly:
    """Evaluate the double bracket on two weight-0 elements."""
    _check_weight_zero(p, "first argument")
    _check_weight_zero(q, "second argument")
    out = TensorPoly.zero(2)
    for w, cw in p.items():
        for v, cv in q.items():
            out = out + _bb_words(w, v, table).scale(cw * cv)
    return out


def _bb_words(w: Word, v: Word, table: DoubleBracketTable) -> TensorPoly:
    if w.is_unit or v.is_unit:
        return TensorPoly.zero(2)
    if len(w) > 1:
        head, tail = w.factors[0], Word(w.factors[1:])
        # {{ab,c}} = a * {{b,c}} + {{a,c}} * b, the 1-jump actions.
        first = _bb_words(tail, v, table).star_left(NCPoly.gen(head), 1)
        second = _bb_words(Word((head,)), v, table).star_right(NCPoly.word(tail), 1)
        return first + second
    if len(v) > 1:
        head, tail = v.factors[0], Word(v.factors[1:])
        # {{a,bc}} = b {{a,c}} + {{a,b}} c, outer products.
        first = _bb_words(w, tail, table).star_left(NCPoly.gen(head), 0)
        second = _bb_words(w, Word((head,)), table).star_right(NCPoly.word(tail), 0)
        return first + second
    return table.value(w.factors[0], v.factors[0])


def bb_ext_L(a: NCPoly, t: TensorPoly, table: DoubleBracketTable) -> TensorPoly:
    """{{a, b1 x b2}}_L = {{a,b1}} x b2."""
    out = TensorPoly.zero(t.rank + 1)
    for ws, c in t.items():
        out = out + eval_bb(a, NCPoly.word(ws[0]), table).append_word(ws[1]).scale(c)
    return out


def bb_ext_R(a: NCPoly, t: TensorPoly, table: DoubleBracketTable) -> TensorPoly:
    """{{a, b1 x b2}}_R = b1 x {{a,b2}}."""
    out = TensorPoly.zero(t.rank + 1)
    for ws, c in t.items():
        out = out + eval_bb(a, NCPoly.word(ws[-1]), table).prepend_word(ws[0]).scale(c)
    return out


def bb_ext_first_L(t: TensorPoly, c: NCPoly, table: DoubleBracketTable) -> TensorPoly:
    """{{b' x b'', c}}_L = {{b',c}} (x)1 b''."""
    out = TensorPoly.zero(3)
    for ws, s in t.items():
        out = out + eval_bb(NCPoly.word(ws[0]), c, table).insert_middle(NCPoly.word(ws[1])).scale(s)
    return out


def bb_ext_first_R(t: TensorPoly, c: NCPoly, table: DoubleBracketTable) -> TensorPoly:
    """{{b' x b'', c}}_R = b' (x)1 {{b'',c}}."""
    out = TensorPoly.zero(3)
    for ws, s in t.items():
        out = out + eval_bb(NCPoly.word(ws[1]), c, table).insert_middle(NCPoly.word(ws[0])).scale(s)
    return out


def skew_residual(a: NCPoly, b: NCPoly, table: DoubleBracketTable, convention: str) -> TensorPoly:
    sign = 1 if convention == PAPER_CONVENTION else -1
    return eval_bb(a, b, table) - eval_bb(b, a, table).sigma(SWAP).scale(sign)


def jacobi_residual(a: NCPoly, b: NCPoly, c: NCPoly, table: DoubleBracketTable) -> TensorPoly:
    """Residual of the left/right extension form of the double Jacobi identity."""
    lhs = bb_ext_L(a, eval_bb(b, c, table), table)
    t1 = bb_ext_first_L(eval_bb(a, b, table), c, table)
    t2 = bb_ext_R(b, eval_bb(a, c, table), table)
    return lhs - t1 - t2


def jacobi_residual_cyclic(a: NCPoly, b: NCPoly, c: NCPoly, table: DoubleBracketTable) -> TensorPoly:
    """Residual of the cyclic three-term form, an independent evaluation."""
    t1 = bb_ext_L(a, eval_bb(b, c, table), table)
    t2 = bb_ext_L(b, eval_bb(c, a, table), table).sigma(SIGMA_123)
    t3 = bb_ext_L(c, eval_bb(a, b, table), table).sigma(SIGMA_132)
    return t1 + t2 + t3


def _gen_polys(table: DoubleBracketTable) -> list[NCPoly]:
    return [NCPoly.gen(g) for g in table.gens]


def check_cyclic_skew(
    table: DoubleBracketTable,
    convention: str = PAPER_CONVENTION,
    seed: int = 0,
    samples: int = 64,
) -> Report:
    """Check the chosen symmetry convention on generator pairs and random monomials."""
    report = Report(f"double-bracket-skew[{convention}]")
    tag = "flip-symmetry" if convention == PAPER_CONVENTION else "skewsymmetry"
    gens = _gen_polys(table)
    checked = 0
    for pa in gens:
        for pb in gens:
            r = skew_residual(pa, pb, table, convention)
            checked += 1
            if not r.is_zero:
                report.add_fail("skew", tag, f"({pa},{pb})", str(r))
    rng = make_rng(seed)
    for _ in range(samples):
        pa = random_monomial(rng, table.gens, 3)
        pb = random_monomial(rng, table.gens, 3)
        r = skew_residual(pa, pb, table, convention)
        checked += 1
        if not r.is_zero:
            report.add_fail("skew", tag, f"({pa},{pb})", str(r))
    if report.ok:
        report.add_pass("skew", tag, f"{checked} instances")
    return report


def check_double_jacobi(table: DoubleBracketTable, seed: int = 0, samples: int = 64) -> Report:
    """Check the double Jacobi identity on generator triples and random monomials."""
    report = Report("double-bracket-jacobi")
    gens = _gen_polys(table)
    checked = 0
    for pa in gens:
        for pb in gens:
            for pc in gens:
                r = jacobi_residual(pa, pb, pc, table)
                checked += 1
                if not r.is_zero:
                    report.add_fail("jacobi", "double-jacobi", f"({pa},{pb},{pc})", str(r))
    rng = make_rng(seed)
    for _ in range(samples):
        pa = random_monomial(rng, table.gens, 3)
        pb = random_monomial(rng, table.gens, 3)
        pc = random_monomial(rng, table.gens, 3)
        r = jacobi_residual(pa, pb, pc, table)
        checked += 1
        if not r.is_zero:
            report.add_fail("jacobi", "double-jacobi", f"({pa},{pb},{pc})", str(r))
    if report.ok:
        report.add_pass("jacobi", "double-jacobi", f"{checked} instances")

    # For antisymmetric brackets the cyclic form is an independent oracle of
    # the same identity; record agreement of the two evaluations.
    if check_cyclic_skew(table, VDB_CONVENTION, seed=seed, samples=8).ok:
        rng = make_rng(seed + 1)
        agree = True
        instances = 0
        for _ in range(max(8, samples // 4)):
            pa = random_monomial(rng, table.gens, 3)
            pb = random_monomial(rng, table.gens, 3)
            pc = random_monomial(rng, table.gens, 3)
            instances += 1
            if jacobi_residual(pa, pb, pc, table) != jacobi_residual_cyclic(pa, pb, pc, table):
                agree = False
                report.add_fail(
                    "jacobi-forms-agree",
                    "double-jacobi-cyclic",
                    f"({pa},{pb},{pc})",
                    str(jacobi_residual(pa, pb, pc, table) - jacobi_residual_cyclic(pa, pb, pc, table)),
                )
        if agree:
            report.add_pass("jacobi-forms-agree", "double-jacobi-cyclic", f"{instances} instances")
    else:
        report.add_info(
            "jacobi-forms-agree",
            "double-jacobi-cyclic",
            "bracket is not antisymmetric; the two formulations are not comparable",
        )
    return report


def check_double_poisson(
    table: DoubleBracketTable,
    convention: str = PAPER_CONVENTION,
    seed: int = 0,
    samples: int = 64,
) -> Report:
    report = Report("double-poisson")
    report.merge(check_cyclic_skew(table, convention, seed=seed, samples=samples))
    report.merge(check_double_jacobi(table, seed=seed, samples=samples))
    return report
