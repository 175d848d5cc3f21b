"""The correspondence between Courant-Dorfman data and lambda-brackets.

A structure on generators in weights 0 and 1 passes to a graded
lambda-bracket table via

    {{e_lam f}} = {{e,f}} + <<e,f>> lam,
    {{e_lam a}} = <<e, da>>,
    {{a_lam e}} = -<<da, e>>,
    {{a_lam b}} = 0,

and back by reading off the lam^0 and lam^1 coefficients on E x E pairs and
validating the mixed-weight entries against the same formulas.  Both
composites are the identity table-for-table, and the axiom suites transport
in both directions; ``roundtrip_check`` / ``roundtrip_check_rev`` assert all
of this on one structure.
"""

from __future__ import annotations

from .dcd import (
    CDBracketTable,
    DCDStructure,
    PairingTable,
    check_cd_axioms,
    eval_pairing,
)
from .diffalg import LAM, LambdaPoly
from .dpva import LambdaBracketTable, check_dpva
from .errors import GradingError
from .ncpoly import A_SORT, E_SORT, NCPoly, TensorPoly
from .reports import Report


def cd_to_dpva(S: DCDStructure) -> LambdaBracketTable:
    """Emit the graded lambda-bracket table of a Courant-Dorfman structure."""
    entries: dict = {}
    for e in S.e_gens:
        for f in S.e_gens:
            coeffs = []
            bracket = S.bracket.value(e, f)
            if not bracket.is_zero:
                coeffs.append(((0,), bracket))
            pairing = S.pairing.value(e, f)
            if not pairing.is_zero:
                coeffs.append(((1,), pairing))
            entries[(e, f)] = LambdaPoly(2, (LAM,), coeffs)
    for e in S.e_gens:
        for a in S.a_gens:
            da = S.derivation.image(a)
            value = TensorPoly.zero(2) if da.is_zero else eval_pairing(NCPoly.gen(e), da, S)
            entries[(e, a)] = LambdaPoly.const(value)
            value_rev = TensorPoly.zero(2) if da.is_zero else eval_pairing(da, NCPoly.gen(e), S)
            entries[(a, e)] = LambdaPoly.const(-value_rev)
    return LambdaBracketTable(S.a_gens, S.e_gens, S.derivation, entries, graded=True)


def dpva_to_cd(T: LambdaBracketTable) -> DCDStructure:
    """Read a Courant-Dorfman structure off a graded lambda-bracket table."""
    if not T.graded:
        raise GradingError("reading off a Courant-Dorfman structure requires a graded table")
    pairing_entries: dict = {}
    bracket_entries: dict = {}
    for e in T.e_gens:
        for f in T.e_gens:
            P = T.value(e, f)
            if P.degree(LAM) > 1:
                raise GradingError(
                    f"entry ({e},{f}) has lambda-degree {P.degree(LAM)}; "
                    "weight -1 grading forces degree <= 1 on these pairs"
                )
            bracket = P.coefficient((0,))
            if not bracket.is_zero:
                bracket_entries[(e, f)] = CDBracketTable.split(bracket)
            pairing = P.coefficient((1,))
            if not pairing.is_zero:
                pairing_entries[(e, f)] = pairing
    S = DCDStructure(
        T.a_gens,
        T.e_gens,
        T.derivation,
        PairingTable(T.e_gens, pairing_entries),
        CDBracketTable(T.e_gens, bracket_entries),
    )
    # The mixed-weight entries carry no free data: they must agree with the
    # pairing against derivative images, and weight-0 pairs must vanish.
    for e in T.e_gens:
        for a in T.a_gens:
            da = S.derivation.image(a)
            want = TensorPoly.zero(2) if da.is_zero else eval_pairing(NCPoly.gen(e), da, S)
            if T.value(e, a) != LambdaPoly.const(want):
                raise GradingError(
                    f"entry ({e},{a}) must equal the pairing against the derivative of {a}"
                )
            want_rev = TensorPoly.zero(2) if da.is_zero else eval_pairing(da, NCPoly.gen(e), S)
            if T.value(a, e) != LambdaPoly.const(-want_rev):
                raise GradingError(
                    f"entry ({a},{e}) must equal minus the pairing of the derivative of {a}"
                )
    for a in T.a_gens:
        for b in T.a_gens:
            if not T.value(a, b).is_zero:
                raise GradingError(f"entry ({a},{b}) must vanish on weight-0 pairs")
    return S


def roundtrip_check(S: DCDStructure, seed: int = 0, samples: int = 16) -> Report:
    """Round trip starting from a Courant-Dorfman structure."""
    report = Report("equivalence-roundtrip")
    axioms = check_cd_axioms(S, seed=seed, samples=max(4, samples // 2))
    if not axioms.ok:
        report.add_fail(
            "preconditions",
            "dcd-axioms",
            "axiom suite reported violations: " + ",".join(axioms.failed_check_ids()),
            "",
        )
    T = cd_to_dpva(S)
    back = dpva_to_cd(T)
    if back == S:
        report.add_pass("roundtrip-tables", "table-identity", "all tables")
    else:
        report.add_fail("roundtrip-tables", "table-identity", "composite differs", "")
    transport = check_dpva(T, seed=seed, samples=samples)
    if transport.ok:
        report.add_pass("axiom-transport", "dpva-axioms", "lambda-bracket suite")
    else:
        status = report.add_fail if axioms.ok else report.add_info
        status(
            "axiom-transport",
            "dpva-axioms",
            "violations: " + ",".join(transport.failed_check_ids()),
            "",
        )
    return report


def roundtrip_check_rev(T: LambdaBracketTable, seed: int = 0, samples: int = 16) -> Report:
    """Round trip starting from a graded lambda-bracket table."""
    report = Report("equivalence-roundtrip-rev")
    dpva_rep = check_dpva(T, seed=seed, samples=samples)
    if not dpva_rep.ok:
        report.add_fail(
            "preconditions",
            "dpva-axioms",
            "axiom suite reported violations: " + ",".join(dpva_rep.failed_check_ids()),
            "",
        )
    S = dpva_to_cd(T)
    back = cd_to_dpva(S)
    if back == T:
        report.add_pass("roundtrip-tables", "table-identity", "all tables")
    else:
        report.add_fail("roundtrip-tables", "table-identity", "composite differs", "")
    transport = check_cd_axioms(S, seed=seed, samples=max(4, samples // 2))
    if transport.ok:
        report.add_pass("axiom-transport", "dcd-axioms", "Courant-Dorfman suite")
    else:
        status = report.add_fail if dpva_rep.ok else report.add_info
        status(
            "axiom-transport",
            "dcd-axioms",
            "violations: " + ",".join(transport.failed_check_ids()),
            "",
        )
    return report
