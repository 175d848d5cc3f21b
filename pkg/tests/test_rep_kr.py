import pytest

from ncbrackets.dcd import fixture_hyp, fixture_zero
from ncbrackets.diffalg import DerivationTable
from ncbrackets.double_bracket import DoubleBracketTable, eval_bb
from ncbrackets.equivalence import cd_to_dpva
from ncbrackets.errors import DimensionCapError, WeightError
from ncbrackets.ncpoly import NCPoly, TensorPoly, Word, a_gen, e_gen
from ncbrackets.rep_kr import (
    CommLambdaPoly,
    CPoly,
    IndexedSym,
    RepContext,
    induced_cd,
    induced_lambda,
    induced_poisson,
    rep_entry,
    rep_module_entry,
)
from ncbrackets.sampling import make_rng, random_poly

X = a_gen("x")
U = e_gen("u")
V = e_gen("v")
E = e_gen("e")
ONE = NCPoly.one()
PX = NCPoly.gen(X)


def sym(base, i, j):
    return CPoly.sym(IndexedSym(base, i, j))


def test_rep_entry_examples():
    got = rep_entry(PX * PX, 1, 1, 2)
    assert got == sym(X, 1, 1) * sym(X, 1, 1) + sym(X, 1, 2) * sym(X, 2, 1)
    assert rep_entry(ONE, 1, 2, 2).is_zero
    assert rep_entry(ONE, 2, 2, 2) == CPoly.one()
    assert rep_entry(PX, 1, 1, 1) == sym(X, 1, 1)


def test_rep_module_entry_examples():
    m = PX * NCPoly.gen(E)
    got = rep_module_entry(m, 1, 1, 2)
    assert got == sym(X, 1, 1) * sym(E, 1, 1) + sym(X, 1, 2) * sym(E, 2, 1)
    m = NCPoly.gen(E) * PX
    got = rep_module_entry(m, 1, 1, 2)
    assert got == sym(X, 1, 1) * sym(E, 1, 1) + sym(X, 2, 1) * sym(E, 1, 2)
    assert rep_module_entry(NCPoly.gen(E), 1, 2, 3) == sym(E, 1, 2)


def test_rep_validations():
    with pytest.raises(WeightError):
        rep_entry(NCPoly.gen(E), 1, 1, 2)
    with pytest.raises(WeightError):
        rep_module_entry(PX, 1, 1, 2)
    with pytest.raises(DimensionCapError):
        rep_entry(PX, 1, 1, 4)
    with pytest.raises(DimensionCapError):
        RepContext(2).rep_word(Word((X,)), 3, 1)


def test_rep_multiplicativity():
    rng = make_rng(3)
    for N in (1, 2, 3):
        ctx = RepContext(N)
        for _ in range(6):
            p = random_poly(rng, (X,), 2, allow_unit=True)
            q = random_poly(rng, (X,), 2, allow_unit=True)
            for i in ctx.indices():
                for j in ctx.indices():
                    direct = ctx.rep(p * q, i, j)
                    summed = CPoly.zero()
                    for t in ctx.indices():
                        summed = summed + ctx.rep(p, i, t) * ctx.rep(q, t, j)
                    assert direct == summed


def test_partial_commutes_with_rep():
    deriv = DerivationTable({X: NCPoly.gen(U)}, domain=[X])
    ctx = RepContext(2, deriv)
    rng = make_rng(5)
    from ncbrackets.sampling import random_jet_word

    for _ in range(12):
        w = random_jet_word(rng, (X,), (U, V), max_len=2, max_jet=1)
        p = NCPoly.word(w)
        for i in ctx.indices():
            for j in ctx.indices():
                assert ctx.partial(ctx.rep(p, i, j)) == ctx.rep(deriv.derive(p), i, j)


LINEAR = DoubleBracketTable([X], {(X, X): TensorPoly.tensor(PX, ONE) - TensorPoly.tensor(ONE, PX)})


def test_induced_poisson_linear_table():
    bracket, report = induced_poisson(LINEAR, 2, seed=0, samples=8)
    assert report.ok, report.to_text()
    # {x_ij, x_uv} = x_uj delta_iv - delta_uj x_iv
    got = bracket.bracket_syms(IndexedSym(X, 1, 2), IndexedSym(X, 2, 1))
    assert got == sym(X, 2, 2) - sym(X, 1, 1)
    # N=1 collapses the bracket to zero
    bracket1, report1 = induced_poisson(LINEAR, 1, seed=0, samples=8)
    assert report1.ok
    assert bracket1.bracket_syms(IndexedSym(X, 1, 1), IndexedSym(X, 1, 1)).is_zero


def test_induced_poisson_zero_table():
    zero = DoubleBracketTable([X], {})
    bracket, report = induced_poisson(zero, 2, seed=0, samples=4)
    assert report.ok
    assert bracket.bracket(sym(X, 1, 1), sym(X, 2, 2)).is_zero


def test_induced_poisson_n1_squares_to_zero():
    # For antisymmetric tables, {p, p} = 0 identically at N=1.
    bracket, _ = induced_poisson(LINEAR, 1, seed=0, samples=4)
    rng = make_rng(7)
    for _ in range(12):
        p = bracket.ctx.rep(random_poly(rng, (X,), 3), 1, 1)
        assert bracket.bracket(p, p).is_zero


def test_induced_poisson_flags_non_poisson_source():
    flip = DoubleBracketTable([X], {(X, X): TensorPoly.tensor(PX, PX)})
    _, report = induced_poisson(flip, 1, seed=0, samples=4)
    assert not report.ok
    assert any(e.check_id == "preconditions" for e in report.failures())


def test_induced_lambda_hyp():
    table = cd_to_dpva(fixture_hyp())
    bracket, report = induced_lambda(table, 1, seed=0, samples=8)
    assert report.ok, report.to_text()
    got = bracket.eval(sym(U, 1, 1), sym(V, 1, 1))
    assert got == CommLambdaPoly.monomial(CPoly.one(), (1,))
    bracket2, report2 = induced_lambda(table, 2, seed=0, samples=8)
    assert report2.ok
    assert bracket2.eval(sym(U, 1, 2), sym(V, 1, 1)).is_zero
    assert bracket2.eval(sym(U, 1, 2), sym(V, 2, 1)) == CommLambdaPoly.monomial(CPoly.one(), (1,))


def test_induced_lambda_zero():
    table = cd_to_dpva(fixture_zero())
    bracket, report = induced_lambda(table, 1, seed=0, samples=4)
    assert report.ok
    assert bracket.eval(sym(U, 1, 1), sym(V, 1, 1)).is_zero


def test_induced_cd_hyp():
    comm, report = induced_cd(fixture_hyp(), 1, seed=0, samples=8)
    assert report.ok, report.to_text()
    assert comm.pairing_syms(IndexedSym(U, 1, 1), IndexedSym(V, 1, 1)) == CPoly.one()
    assert comm.partial(sym(X, 1, 1)) == sym(U, 1, 1)
    assert comm.bracket(sym(U, 1, 1), sym(V, 1, 1)).is_zero
    comm2, report2 = induced_cd(fixture_hyp(), 2, seed=0, samples=8)
    assert report2.ok, report2.to_text()
    # <u_ij, v_uv> = delta_uj delta_iv
    assert comm2.pairing_syms(IndexedSym(U, 1, 2), IndexedSym(V, 2, 1)) == CPoly.one()
    assert comm2.pairing_syms(IndexedSym(U, 1, 2), IndexedSym(V, 1, 1)).is_zero
    # <d_N x_ij, d_N x_uv> = <u_ij, u_uv> = 0
    assert comm2.pairing(comm2.partial(sym(X, 1, 2)), comm2.partial(sym(X, 2, 1))).is_zero


def test_induced_cd_zero():
    comm, report = induced_cd(fixture_zero(), 2, seed=0, samples=4)
    assert report.ok
    assert comm.partial(sym(X, 1, 1)).is_zero


def test_induced_cd_bracket_carrying(small_corpus):
    carrying = [S for S in small_corpus if list(S.bracket.items())]
    assert carrying, "corpus should contain bracket-carrying structures"
    for S in carrying[:2]:
        _, report = induced_cd(S, 2, seed=0, samples=4)
        assert report.ok, report.to_text()


def test_entry_compat_against_nc_bracket():
    # Expanding a bracket value entrywise agrees with the commutative bracket
    # of the expansions, for polynomial arguments.
    bracket, _ = induced_poisson(LINEAR, 2, seed=0, samples=4)
    rng = make_rng(11)
    for _ in range(6):
        p = random_poly(rng, (X,), 2)
        q = random_poly(rng, (X,), 2)
        value = eval_bb(p, q, LINEAR)
        for i, j, u, v in ((1, 1, 2, 2), (1, 2, 2, 1)):
            direct = CPoly.zero()
            for (w1, w2), c in value.items():
                direct = direct + (
                    bracket.ctx.rep_word(w1, u, j) * bracket.ctx.rep_word(w2, i, v)
                ).scale(c)
            assert direct == bracket.bracket(bracket.ctx.rep(p, i, j), bracket.ctx.rep(q, u, v))
