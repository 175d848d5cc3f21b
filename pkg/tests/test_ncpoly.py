from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncbrackets.errors import RankError, SlotIndexError, SortError
from ncbrackets.ncpoly import (
    SIGMA_123,
    SIGMA_132,
    SWAP,
    GenSym,
    NCPoly,
    TensorPoly,
    Word,
    a_gen,
    all_perms,
    apply_sigma,
    compose_perm,
    cyclic_perm,
    e_gen,
    nc_mul,
    normalize_terms,
    otimes1,
    star_i,
)

X = a_gen("x")
Y = a_gen("y")
U = e_gen("u")
ONE = NCPoly.one()


def P(*syms):
    return NCPoly.word(Word(syms))


# --- generators and words ---------------------------------------------------

def test_gensym_sorts_and_jets():
    assert a_gen("x").weight == 0
    assert e_gen("u").weight == 1
    assert e_gen("u", jet=2).weight == 3
    with pytest.raises(SortError):
        GenSym("x", "A", jet=1)
    with pytest.raises(SortError):
        GenSym("x", "Q")


def test_word_weight_and_unit():
    w = Word((X, U, X))
    assert w.weight == 1
    assert Word().is_unit and Word().weight == 0
    assert str(Word()) == "1"
    assert str(Word((X, e_gen("u", jet=1)))) == "x*d(u)"


# --- normal form ------------------------------------------------------------

def test_normalize_idempotent():
    w1, w2 = Word((X,)), Word((X, Y))
    raw = [(w1, Fraction(1)), (w1, Fraction(2)), (w2, Fraction(0)), (w2, Fraction(-1)), (w2, Fraction(1))]
    once = normalize_terms(raw)
    twice = normalize_terms(once.items())
    assert once == twice == {w1: Fraction(3)}


def test_no_zero_coefficients_stored():
    p = P(X) - P(X)
    assert p.is_zero and not list(p.items())


def test_terms_sorted_canonically():
    p = P(X, Y) + P(Y) + ONE + P(X)
    keys = [str(w) for w, _ in p.terms()]
    assert keys == ["1", "x", "y", "x*y"]


# --- nc_mul -----------------------------------------------------------------

def test_nc_mul_examples():
    assert nc_mul(P(X), P(X)) == P(X, X)
    assert nc_mul(ONE, P(X) + 2 * P(Y)) == P(X) + 2 * P(Y)
    # (x - 1)(x + 1) = x^2 - 1, hand expansion of the four cross terms
    assert (P(X) - ONE) * (P(X) + ONE) == P(X, X) - ONE


@st.composite
def ncpolys(draw, gens=(X, Y), max_len=2, max_terms=3):
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        n = draw(st.integers(0, max_len))
        w = Word(tuple(draw(st.sampled_from(gens)) for _ in range(n)))
        c = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
        terms.append((w, c))
    return NCPoly(terms)


@settings(max_examples=60, deadline=None)
@given(ncpolys(), ncpolys(), ncpolys())
def test_nc_mul_associative(p, q, r):
    assert nc_mul(nc_mul(p, q), r) == nc_mul(p, nc_mul(q, r))


def test_weight_additive_on_homogeneous():
    p = P(X, U)
    q = P(U)
    assert nc_mul(p, q).weight() == 2


# --- module actions ---------------------------------------------------------

def test_star_examples():
    t = TensorPoly.tensor(P(Y), NCPoly.gen(a_gen("z")))
    assert str(star_i(P(X), t, 0, "left")) == "x*y ox z"
    assert str(star_i(P(X), t, 1, "left")) == "y ox x*z"
    assert str(star_i(P(X), t, 0, "right")) == "y ox z*x"
    assert str(star_i(P(X), t, 1, "right")) == "y*x ox z"
    assert star_i(ONE, t, 0, "left") == t


def test_star_out_of_range():
    t = TensorPoly.tensor(P(X), P(Y))
    with pytest.raises(SlotIndexError):
        star_i(P(X), t, 2, "left")


@pytest.mark.parametrize("rank", [2, 3])
def test_star_actions_commute(rank):
    slots = [P(X), P(Y), P(X)][:rank]
    t = TensorPoly.tensor(*slots)
    for i in range(rank):
        for j in range(rank):
            one_way = star_i(P(Y), star_i(P(X), t, i, "left"), j, "right")
            other = star_i(P(X), star_i(P(Y), t, j, "right"), i, "left")
            assert one_way == other


# --- jump insertion ---------------------------------------------------------

def test_otimes1_examples():
    t = TensorPoly.tensor(P(Y), NCPoly.gen(a_gen("z")))
    assert str(otimes1(P(X), t)) == "y ox x ox z"
    assert str(otimes1(TensorPoly.tensor(P(X), P(Y)), NCPoly.gen(a_gen("z")))) == "x ox z ox y"
    assert otimes1(NCPoly.zero(), t).is_zero


def test_otimes1_rank_errors():
    t2 = TensorPoly.tensor(P(X), P(Y))
    with pytest.raises(RankError):
        otimes1(t2, t2)
    with pytest.raises(RankError):
        otimes1(P(X), P(Y))


def test_otimes1_bilinear():
    t = TensorPoly.tensor(P(Y), P(X))
    assert otimes1(P(X) + P(Y), t) == otimes1(P(X), t) + otimes1(P(Y), t)


# --- permutations -----------------------------------------------------------

def test_sigma_examples():
    t2 = TensorPoly.tensor(P(X), P(Y))
    assert apply_sigma(SWAP, t2) == TensorPoly.tensor(P(Y), P(X))
    a, b, c = P(X), P(Y), NCPoly.gen(a_gen("z"))
    t3 = TensorPoly.tensor(a, b, c)
    assert apply_sigma(SIGMA_123, t3) == TensorPoly.tensor(c, a, b)
    assert apply_sigma(SIGMA_132, apply_sigma(SIGMA_123, t3)) == t3
    assert t3.sigma_cyclic() == apply_sigma(SIGMA_123, t3)
    assert cyclic_perm(3) == SIGMA_123


def test_sigma_group_action_exhaustive():
    t3 = TensorPoly.tensor(P(X), P(Y), NCPoly.gen(a_gen("z")))
    for s in all_perms(3):
        for t in all_perms(3):
            assert apply_sigma(compose_perm(s, t), t3) == apply_sigma(s, apply_sigma(t, t3))


def test_sigma_size_mismatch():
    t2 = TensorPoly.tensor(P(X), P(Y))
    with pytest.raises(SlotIndexError):
        apply_sigma(SIGMA_123, t2)


# --- tensor arithmetic ------------------------------------------------------

def test_mixed_rank_is_hard_error():
    t2 = TensorPoly.tensor(P(X), P(Y))
    t3 = TensorPoly.tensor(P(X), P(Y), P(X))
    with pytest.raises(RankError):
        t2 + t3


def test_projections_and_weights():
    mixed = TensorPoly.tensor(NCPoly.gen(U), P(X)) + TensorPoly.tensor(P(X), NCPoly.gen(U))
    assert mixed.project((1, 0)) == TensorPoly.tensor(NCPoly.gen(U), P(X))
    assert mixed.total_weight() == 1
    assert mixed.is_homogeneous(1)
    assert not (mixed + TensorPoly.tensor(P(X), P(X))).is_homogeneous()
