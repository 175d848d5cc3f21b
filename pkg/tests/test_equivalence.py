import pytest

from ncbrackets.dcd import fixture_bad, fixture_hyp, fixture_zero
from ncbrackets.diffalg import LAM, DerivationTable, LambdaPoly
from ncbrackets.dpva import LambdaBracketTable, check_dpva
from ncbrackets.equivalence import cd_to_dpva, dpva_to_cd, roundtrip_check, roundtrip_check_rev
from ncbrackets.errors import GradingError
from ncbrackets.ncpoly import NCPoly, TensorPoly, a_gen, e_gen

X = a_gen("x")
U = e_gen("u")
V = e_gen("v")
E = e_gen("e")
ONE = NCPoly.one()


def t2(a, b):
    return TensorPoly.tensor(a, b)


def test_cd_to_dpva_hyp_table_values():
    table = cd_to_dpva(fixture_hyp())
    lam_11 = LambdaPoly.monomial(t2(ONE, ONE), (1,))
    assert table.value(U, V) == lam_11
    assert table.value(V, U) == lam_11
    assert table.value(U, U).is_zero
    assert table.value(V, V).is_zero
    # mixed entries: {{u_lam x}} = <<u, dx>> = <<u,u>> = 0, {{v_lam x}} = <<v,u>>
    assert table.value(U, X).is_zero
    assert table.value(V, X) == LambdaPoly.const(t2(ONE, ONE))
    assert table.value(X, V) == LambdaPoly.const(t2(ONE, ONE)).scale(-1)
    assert table.value(X, X).is_zero
    assert table.graded


def test_cd_to_dpva_zero():
    table = cd_to_dpva(fixture_zero())
    for a in table.gens:
        for b in table.gens:
            assert table.value(a, b).is_zero


def test_cd_to_dpva_single_generator():
    S_e = e_gen("e")
    from ncbrackets.dcd import CDBracketTable, DCDStructure, PairingTable

    S = DCDStructure(
        [],
        [S_e],
        DerivationTable({}),
        PairingTable([S_e], {(S_e, S_e): t2(ONE, ONE)}),
        CDBracketTable([S_e], {}),
    )
    table = cd_to_dpva(S)
    assert table.value(S_e, S_e) == LambdaPoly.monomial(t2(ONE, ONE), (1,))


def test_dpva_to_cd_reads_off_coefficients():
    table = LambdaBracketTable(
        [], [E], DerivationTable({}), {(E, E): LambdaPoly.monomial(t2(ONE, ONE), (1,))}, graded=True
    )
    S = dpva_to_cd(table)
    assert S.pairing.value(E, E) == t2(ONE, ONE)
    assert S.bracket.value(E, E).is_zero


def test_dpva_to_cd_zero():
    table = LambdaBracketTable([], [E], DerivationTable({}), {}, graded=True)
    S = dpva_to_cd(table)
    assert not list(S.pairing.items()) and not list(S.bracket.items())


def test_dpva_to_cd_grading_violation():
    with pytest.raises(GradingError):
        LambdaBracketTable(
            [], [E], DerivationTable({}), {(E, E): LambdaPoly.monomial(t2(ONE, ONE), (2,))}, graded=True
        )
    # an ungraded table with the same entry is constructible but not readable
    table = LambdaBracketTable(
        [], [E], DerivationTable({}), {(E, E): LambdaPoly.monomial(t2(ONE, ONE), (2,))}, graded=False
    )
    with pytest.raises(GradingError):
        dpva_to_cd(table)


def test_dpva_to_cd_rejects_inconsistent_mixed_entries():
    deriv = DerivationTable({X: NCPoly.gen(U)}, domain=[X])
    table = LambdaBracketTable(
        [X],
        [U],
        deriv,
        {(U, X): LambdaPoly.const(t2(ONE, ONE))},  # should be <<u, u>> = 0
        graded=True,
    )
    with pytest.raises(GradingError):
        dpva_to_cd(table)


def test_roundtrip_fixtures():
    for fixture in (fixture_hyp(), fixture_zero()):
        assert dpva_to_cd(cd_to_dpva(fixture)) == fixture
        report = roundtrip_check(fixture, seed=0, samples=8)
        assert report.ok, report.to_text()


def test_roundtrip_rev_from_hyp_table():
    table = cd_to_dpva(fixture_hyp())
    back = cd_to_dpva(dpva_to_cd(table))
    assert back == table
    report = roundtrip_check_rev(table, seed=0, samples=8)
    assert report.ok, report.to_text()


def test_roundtrip_flags_bad_preconditions():
    report = roundtrip_check(fixture_bad(), seed=0, samples=4)
    assert not report.ok
    assert any(e.check_id == "preconditions" for e in report.failures())
    # the table identity itself still holds
    assert any(e.check_id == "roundtrip-tables" and e.status == "pass" for e in report.entries)


def test_corpus_roundtrip_and_transport(small_corpus):
    for S in small_corpus:
        table = cd_to_dpva(S)
        assert dpva_to_cd(table) == S
        assert cd_to_dpva(dpva_to_cd(table)) == table
        assert check_dpva(table, seed=2, samples=6).ok
