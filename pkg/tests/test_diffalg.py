from fractions import Fraction

import pytest

from ncbrackets.diffalg import (
    LAM,
    DerivationTable,
    LambdaPoly,
    arrow_insert,
    d,
    d_tensor,
    exp_partial_left,
    get_lambda_cap,
    lambda_shift_total,
    set_lambda_cap,
)
from ncbrackets.errors import LambdaCapError, MissingGeneratorError, SortError, WeightError
from ncbrackets.ncpoly import NCPoly, TensorPoly, Word, a_gen, all_perms, e_gen
from ncbrackets.sampling import make_rng, random_jet_poly

X = a_gen("x")
E = e_gen("e")
U = e_gen("u")
ONE = NCPoly.one()
TABLE = DerivationTable({X: NCPoly.gen(U)}, domain=[X])


def t2(a, b):
    return TensorPoly.tensor(a, b)


def lam_mono(t, p):
    return LambdaPoly.monomial(t, (p,))


# --- derivation -------------------------------------------------------------

def test_d_examples():
    assert d(NCPoly.gen(X), TABLE) == NCPoly.gen(U)
    assert d(NCPoly.gen(E), TABLE) == NCPoly.gen(E.raised())
    got = d(NCPoly.gen(X) * NCPoly.gen(E), TABLE)
    want = NCPoly.gen(U) * NCPoly.gen(E) + NCPoly.gen(X) * NCPoly.gen(E.raised())
    assert got == want
    assert d(ONE, TABLE).is_zero


def test_d_missing_generator():
    with pytest.raises(MissingGeneratorError):
        d(NCPoly.gen(a_gen("q")), TABLE)


def test_d_missing_defaults_to_zero_inside_domain():
    table = DerivationTable({}, domain=[X])
    assert d(NCPoly.gen(X), table).is_zero


def test_table_validation():
    with pytest.raises(WeightError):
        DerivationTable({X: NCPoly.gen(X)})  # weight-0 image
    with pytest.raises(WeightError):
        DerivationTable({X: NCPoly.gen(E.raised())})  # jet symbol: wrong weight
    with pytest.raises(SortError):
        DerivationTable({E: NCPoly.gen(U)})  # E-sort key


def test_d_is_degree_one_derivation():
    rng = make_rng(3)
    for _ in range(24):
        p = random_jet_poly(rng, (X,), (E, U), max_len=3, max_jet=1)
        q = random_jet_poly(rng, (X,), (E, U), max_len=3, max_jet=1)
        assert d(p * q, TABLE) == d(p, TABLE) * q + p * d(q, TABLE)
    w = Word((X, E))
    assert d(NCPoly.word(w), TABLE).weight() == w.weight + 1


def test_d_tensor_examples():
    assert d_tensor(t2(ONE, ONE), TABLE).is_zero
    assert d_tensor(t2(NCPoly.gen(X), ONE), TABLE) == t2(NCPoly.gen(U), ONE)
    got = d_tensor(t2(NCPoly.gen(X), NCPoly.gen(X)), TABLE)
    want = t2(NCPoly.gen(U), NCPoly.gen(X)) + t2(NCPoly.gen(X), NCPoly.gen(U))
    assert got == want


def test_d_tensor_commutes_with_sigma():
    rng = make_rng(5)
    for _ in range(10):
        slots = [random_jet_poly(rng, (X,), (E,), max_len=2) for _ in range(3)]
        t = TensorPoly.tensor(*slots)
        for perm in all_perms(3):
            assert d_tensor(t.sigma(perm), TABLE) == d_tensor(t, TABLE).sigma(perm)


# --- lambda polynomials -----------------------------------------------------

def test_lambda_shift_examples():
    P = lam_mono(t2(ONE, ONE), 1)
    assert lambda_shift_total(P, LAM, -1, TABLE) == P.scale(-1)
    P2 = lam_mono(t2(NCPoly.gen(X), ONE), 1)
    want = P2 + LambdaPoly.const(t2(NCPoly.gen(U), ONE))
    assert lambda_shift_total(P2, LAM, 1, TABLE) == want
    const = LambdaPoly.const(t2(NCPoly.gen(X), ONE))
    assert lambda_shift_total(const, LAM, 1, TABLE) == const


def test_shift_up_then_down_is_identity():
    rng = make_rng(9)
    for _ in range(20):
        coeffs = []
        for p in range(3):
            poly = random_jet_poly(rng, (X,), (E,), max_len=2, max_jet=1)
            other = random_jet_poly(rng, (X,), (E,), max_len=1, max_jet=1)
            coeffs.append(((p,), TensorPoly.tensor(poly, other)))
        P = LambdaPoly(2, (LAM,), coeffs)
        up = lambda_shift_total(P, LAM, 1, TABLE)
        down = P.subst_affine(LAM, 1, TABLE)  # same move twice with opposite inner sign
        # substituting lam -> lam + d then lam -> lam - d recovers the input
        roundtrip = _subst_minus(up, TABLE)
        assert roundtrip == P


def _subst_minus(P, table):
    # lam -> lam - d: expand binomially with alternating signs
    from math import comb

    out = LambdaPoly.zero(P.rank, P.vars)
    for (p,), t in P.items():
        dj = t
        for j in range(p + 1):
            if j > 0:
                dj = table.derive_tensor(dj)
            if dj.is_zero:
                break
            out = out + LambdaPoly.monomial(dj.scale(comb(p, j) * (-1) ** j), (p - j,))
    return out


def test_arrow_insert_examples():
    P = lam_mono(t2(ONE, ONE), 1)
    got = arrow_insert(P, NCPoly.gen(X), "star1", TABLE)
    want = lam_mono(t2(NCPoly.gen(X), ONE), 1) + LambdaPoly.const(t2(NCPoly.gen(U), ONE))
    assert got == want
    got = arrow_insert(P, NCPoly.gen(E), "otimes1", TABLE)
    want = LambdaPoly.monomial(TensorPoly.tensor(ONE, NCPoly.gen(E), ONE), (1,)) + LambdaPoly.const(
        TensorPoly.tensor(ONE, NCPoly.gen(E.raised()), ONE)
    )
    assert got == want
    assert arrow_insert(LambdaPoly.zero(2), NCPoly.gen(X), "star1", TABLE).is_zero


def test_arrow_insert_unit_is_plain_insertion():
    rng = make_rng(11)
    for _ in range(10):
        coeffs = []
        for p in range(3):
            poly = random_jet_poly(rng, (X,), (E,), max_len=2)
            coeffs.append(((p,), TensorPoly.tensor(poly, ONE)))
        P = LambdaPoly(2, (LAM,), coeffs)
        got = arrow_insert(P, ONE, "star1", TABLE)
        assert got == P  # multiplying the unit into slot 1 changes nothing
        got3 = arrow_insert(P, ONE, "otimes1", TABLE)
        want3 = P.map_coeffs(lambda t: t.insert_middle(ONE), rank=3)
        assert got3 == want3


def test_exp_partial_left_examples():
    P = lam_mono(t2(ONE, ONE), 1)
    assert exp_partial_left(ONE, P, TABLE) == P.map_coeffs(lambda t: t.star_left(ONE, 1))
    got = exp_partial_left(NCPoly.gen(X), P, TABLE)
    want = lam_mono(t2(ONE, NCPoly.gen(X)), 1) + LambdaPoly.const(t2(ONE, NCPoly.gen(U)))
    assert got == want
    const = LambdaPoly.const(t2(ONE, ONE))
    assert exp_partial_left(NCPoly.gen(X), const, TABLE) == LambdaPoly.const(t2(ONE, NCPoly.gen(X)))


def test_lambda_cap_enforced():
    assert get_lambda_cap() == 8
    with pytest.raises(LambdaCapError):
        LambdaPoly.monomial(t2(ONE, ONE), (9,))
    set_lambda_cap(3)
    try:
        with pytest.raises(LambdaCapError):
            LambdaPoly.monomial(t2(ONE, ONE), (4,))
    finally:
        set_lambda_cap(8)


def test_subst_var_to_sum():
    P = lam_mono(t2(ONE, ONE), 2)
    got = P.subst_var_to_sum(LAM, "lam", "mu")
    assert got.coefficient((1, 1)) == t2(ONE, ONE).scale(2)
    assert got.coefficient((2, 0)) == t2(ONE, ONE)
    assert got.coefficient((0, 2)) == t2(ONE, ONE)
