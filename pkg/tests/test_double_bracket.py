from fractions import Fraction

import pytest

from ncbrackets.double_bracket import (
    DoubleBracketTable,
    bb_ext_L,
    bb_ext_R,
    bb_ext_first_L,
    check_cyclic_skew,
    check_double_jacobi,
    check_double_poisson,
    eval_bb,
    jacobi_residual,
    jacobi_residual_cyclic,
    skew_residual,
)
from ncbrackets.errors import MissingGeneratorError, WeightError
from ncbrackets.ncpoly import SWAP, NCPoly, TensorPoly, Word, a_gen, e_gen
from ncbrackets.sampling import make_rng, random_monomial, random_poly

X = a_gen("x")
Y = a_gen("y")
ONE = NCPoly.one()
PX = NCPoly.gen(X)
PY = NCPoly.gen(Y)


def t2(a, b):
    return TensorPoly.tensor(a, b)


LINEAR = DoubleBracketTable([X], {(X, X): t2(PX, ONE) - t2(ONE, PX)})
ZERO_TABLE = DoubleBracketTable([X], {})
SYMMETRIC = DoubleBracketTable([X], {(X, X): t2(PX, PX)})


def test_eval_examples():
    assert eval_bb(PX, PX * PX, LINEAR) == t2(PX * PX, ONE) - t2(ONE, PX * PX)
    assert eval_bb(ONE, PX, LINEAR).is_zero
    assert eval_bb(PX, ONE, LINEAR).is_zero
    assert eval_bb(PX * PX, PX, ZERO_TABLE).is_zero


def test_eval_rejects_weight():
    u = NCPoly.gen(e_gen("u"))
    with pytest.raises(WeightError):
        eval_bb(u, PX, LINEAR)


def test_eval_rejects_unknown_generator():
    with pytest.raises(MissingGeneratorError):
        eval_bb(PY, PY, LINEAR)


def test_outer_leibniz_second_argument():
    rng = make_rng(2)
    for _ in range(20):
        a = random_monomial(rng, LINEAR.gens, 2)
        b = random_monomial(rng, LINEAR.gens, 2)
        c = random_monomial(rng, LINEAR.gens, 2)
        got = eval_bb(a, b * c, LINEAR)
        want = eval_bb(a, c, LINEAR).star_left(b, 0) + eval_bb(a, b, LINEAR).star_right(c, 0)
        assert got == want


def test_inner_leibniz_first_argument():
    rng = make_rng(4)
    for _ in range(20):
        a = random_monomial(rng, LINEAR.gens, 2)
        b = random_monomial(rng, LINEAR.gens, 2)
        c = random_monomial(rng, LINEAR.gens, 2)
        got = eval_bb(a * b, c, LINEAR)
        want = eval_bb(b, c, LINEAR).star_left(a, 1) + eval_bb(a, c, LINEAR).star_right(b, 1)
        assert got == want


def test_extension_examples():
    got = bb_ext_L(PX, t2(PX, ONE), LINEAR)
    assert got == TensorPoly.tensor(PX, ONE, ONE) - TensorPoly.tensor(ONE, PX, ONE)
    assert bb_ext_L(PX, t2(ONE, PX), LINEAR).is_zero
    got = bb_ext_first_L(t2(PX, ONE), PX, LINEAR)
    assert got == TensorPoly.tensor(PX, ONE, ONE) - TensorPoly.tensor(ONE, ONE, PX)
    got = bb_ext_R(PX, t2(ONE, PX), LINEAR)
    assert got == TensorPoly.tensor(ONE, PX, ONE) - TensorPoly.tensor(ONE, ONE, PX)


def test_skew_conventions():
    # the linear bracket is antisymmetric, not flip-fixed
    assert not check_cyclic_skew(LINEAR, "paper", seed=1, samples=8).ok
    assert check_cyclic_skew(LINEAR, "vdb", seed=1, samples=8).ok
    # the flip-fixed example passes the printed convention
    assert check_cyclic_skew(SYMMETRIC, "paper", seed=1, samples=8).ok
    assert check_cyclic_skew(ZERO_TABLE, "paper", seed=1, samples=8).ok
    r = skew_residual(PX, PX, LINEAR, "paper")
    assert r == (t2(PX, ONE) - t2(ONE, PX)).scale(2)


def test_jacobi_passes_for_linear_bracket():
    report = check_double_jacobi(LINEAR, seed=3, samples=48)
    assert report.ok, report.to_text()


def test_jacobi_zero_table():
    assert check_double_jacobi(ZERO_TABLE, seed=0, samples=8).ok


def test_jacobi_forms_agree_for_antisymmetric_tables():
    # For brackets satisfying the antisymmetric convention the two Jacobi
    # formulations are the same function on every input triple.
    rng = make_rng(6)
    tables = [
        LINEAR,
        DoubleBracketTable(
            [X, Y],
            {
                (X, Y): t2(PX, ONE),
                (Y, X): (t2(PX, ONE)).sigma(SWAP).scale(-1),
            },
        ),
    ]
    for table in tables:
        for _ in range(16):
            a = random_monomial(rng, table.gens, 3)
            b = random_monomial(rng, table.gens, 3)
            c = random_monomial(rng, table.gens, 3)
            assert jacobi_residual(a, b, c, table) == jacobi_residual_cyclic(a, b, c, table)


def test_jacobi_forms_both_flag_symmetric_violation():
    # With the flip-fixed table the two formulations differ as functions but
    # both report a Jacobi violation on the same witness.
    r1 = jacobi_residual(PX, PX, PX, SYMMETRIC)
    r2 = jacobi_residual_cyclic(PX, PX, PX, SYMMETRIC)
    assert not r1.is_zero and not r2.is_zero
    assert r1 != r2


def test_jacobi_residual_trilinear():
    rng = make_rng(8)
    a = random_poly(rng, LINEAR.gens, 2)
    b = random_poly(rng, LINEAR.gens, 2)
    c = random_poly(rng, LINEAR.gens, 2)
    s = Fraction(3, 2)
    assert jacobi_residual(a.scale(s), b, c, LINEAR) == jacobi_residual(a, b, c, LINEAR).scale(s)
    assert jacobi_residual(a, b.scale(s), c, LINEAR) == jacobi_residual(a, b, c, LINEAR).scale(s)
    assert jacobi_residual(a, b, c.scale(s), LINEAR) == jacobi_residual(a, b, c, LINEAR).scale(s)


def test_report_determinism():
    a = check_double_poisson(LINEAR, "vdb", seed=5, samples=16)
    b = check_double_poisson(LINEAR, "vdb", seed=5, samples=16)
    assert a.to_text() == b.to_text()
    assert a.to_json() == b.to_json()
