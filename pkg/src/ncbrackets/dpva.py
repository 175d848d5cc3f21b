"""Double lambda-brackets and the double Poisson vertex algebra axioms.

A lambda-bracket is given on jet-0 generator pairs of the free differential
algebra and extends to everything by

* sesquilinearity: a jet in the left slot pulls out ``(-lam)``, a jet in the
  right slot applies the operator ``(lam + d)``;
* the outer Leibniz rule in the right slot;
* the inner Leibniz rule in the left slot, with the derivative thrown onto
  the bystander factor (the arrow calculus).

``eval_lb`` implements two fixed reduction strategies (left-first and
right-first); the identity of their outputs is a consistency check the test
suite sweeps at scale, since confluence is asserted empirically rather than
proved.

The Jacobi identity is evaluated both through the extension machinery and
through an independent fully expanded coefficient form (nested Sweedler sums
with the ``(lam+mu+d)^q`` middle-slot action); the two must agree
term-for-term.
"""

from __future__ import annotations

from math import comb
from typing import Mapping, Sequence

from .errors import GradingError, MissingGeneratorError, RankError, SortError
from .diffalg import (
    LAM,
    MU,
    DerivationTable,
    LambdaPoly,
    arrow_insert,
    exp_partial_left,
    lambda_shift_total,
)
from .ncpoly import A_SORT, E_SORT, SWAP, GenSym, NCPoly, TensorPoly, Word
from .reports import Report
from .sampling import make_rng, random_jet_poly

LEFT_FIRST = "left-first"
RIGHT_FIRST = "right-first"


class LambdaBracketTable:
    """Generator-pair values of a double lambda-bracket, plus the derivation."""

    def __init__(
        self,
        a_gens: Sequence[GenSym],
        e_gens: Sequence[GenSym],
        derivation: DerivationTable,
        entries: Mapping[tuple[GenSym, GenSym], LambdaPoly],
        graded: bool = False,
    ):
        self.a_gens = tuple(sorted(set(a_gens), key=GenSym.key))
        self.e_gens = tuple(sorted(set(e_gens), key=GenSym.key))
        for g in self.a_gens:
            if g.sort != A_SORT or g.jet != 0:
                raise SortError(f"invalid A-sort generator {g}")
        for g in self.e_gens:
            if g.sort != E_SORT or g.jet != 0:
                raise SortError(f"e-generators must be jet-0 E-sort, got {g}")
        self.derivation = derivation
        self.graded = graded
        known = set(self.a_gens) | set(self.e_gens)
        self._entries: dict[tuple[GenSym, GenSym], LambdaPoly] = {}
        for (x, y), P in entries.items():
            if x not in known or y not in known:
                raise MissingGeneratorError(f"table entry ({x},{y}) uses undeclared generators")
            if P.rank != 2:
                raise RankError(f"table value for ({x},{y}) must have rank-2 coefficients")
            if P.vars != (LAM,):
                raise RankError(f"table value for ({x},{y}) must be a polynomial in {LAM} only")
            if graded:
                _check_graded_entry(x, y, P)
            if not P.is_zero:
                self._entries[(x, y)] = P

    @property
    def gens(self) -> tuple[GenSym, ...]:
        return self.a_gens + self.e_gens

    def value(self, x: GenSym, y: GenSym) -> LambdaPoly:
        if x not in self.gens or y not in self.gens:
            raise MissingGeneratorError(f"unknown generator in pair ({x},{y})")
        return self._entries.get((x, y), LambdaPoly.zero(2, (LAM,)))

    def items(self):
        return sorted(self._entries.items(), key=lambda kv: (kv[0][0].key(), kv[0][1].key()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaBracketTable):
            return NotImplemented
        if (self.a_gens, self.e_gens) != (other.a_gens, other.e_gens):
            return False
        if self.derivation != other.derivation:
            return False
        return self._entries == other._entries


def _check_graded_entry(x: GenSym, y: GenSym, P: LambdaPoly) -> None:
    expected_base = x.weight + y.weight - 1
    for (p,), t in P.items():
        want = expected_base - p
        if want < 0 or not t.is_homogeneous(want):
            raise GradingError(
                f"entry ({x},{y}) at lam^{p} must be homogeneous of weight {want}, got {t}"
            )


def eval_lb(p: NCPoly, q: NCPoly, table: LambdaBracketTable, strategy: str = LEFT_FIRST) -> LambdaPoly:
    """Evaluate the lambda-bracket on two elements of the differential algebra."""
    out = LambdaPoly.zero(2, (LAM,))
    for w, cw in p.items():
        for v, cv in q.items():
            out = out + _lb_words(w, v, table, strategy).scale(cw * cv)
    return out


def _lb_words(w: Word, v: Word, table: LambdaBracketTable, strategy: str) -> LambdaPoly:
    if w.is_unit or v.is_unit:
        return LambdaPoly.zero(2, (LAM,))
    if strategy == LEFT_FIRST:
        return _lb_left_first(w, v, table)
    if strategy == RIGHT_FIRST:
        return _lb_right_first(w, v, table)
    raise RankError(f"unknown reduction strategy {strategy!r}")


def _lb_left_first(w: Word, v: Word, table: LambdaBracketTable) -> LambdaPoly:
    if w.is_unit or v.is_unit:
        return LambdaPoly.zero(2, (LAM,))
    if len(w) > 1:
        head, tail = w.factors[0], Word(w.factors[1:])
        P = _lb_left_first(Word((head,)), v, table)
        first = arrow_insert(P, NCPoly.word(tail), "star1", table.derivation)
        Q = _lb_left_first(tail, v, table)
        second = exp_partial_left(NCPoly.gen(head), Q, table.derivation)
        return first + second
    f = w.factors[0]
    if f.jet > 0:
        P = _lb_left_first(Word((f.base(),)), v, table)
        return P.times_power(LAM, f.jet).scale((-1) ** f.jet)
    return _lb_reduce_right(f, v, table)


def _lb_reduce_right(x: GenSym, v: Word, table: LambdaBracketTable) -> LambdaPoly:
    if v.is_unit:
        return LambdaPoly.zero(2, (LAM,))
    if len(v) > 1:
        head, tail = v.factors[0], Word(v.factors[1:])
        left = _lb_reduce_right(x, tail, table).map_coeffs(
            lambda t: t.star_left(NCPoly.gen(head), 0)
        )
        right = _lb_reduce_right(x, Word((head,)), table).map_coeffs(
            lambda t: t.star_right(NCPoly.word(tail), 0)
        )
        return left + right
    g = v.factors[0]
    if g.jet > 0:
        P = _lb_reduce_right(x, Word((g.base(),)), table)
        return P.apply_lambda_plus_partial(LAM, table.derivation, k=g.jet)
    return table.value(x, g)


def _lb_right_first(w: Word, v: Word, table: LambdaBracketTable) -> LambdaPoly:
    if w.is_unit or v.is_unit:
        return LambdaPoly.zero(2, (LAM,))
    if len(v) > 1:
        head, tail = v.factors[0], Word(v.factors[1:])
        left = _lb_right_first(w, tail, table).map_coeffs(
            lambda t: t.star_left(NCPoly.gen(head), 0)
        )
        right = _lb_right_first(w, Word((head,)), table).map_coeffs(
            lambda t: t.star_right(NCPoly.word(tail), 0)
        )
        return left + right
    g = v.factors[0]
    if g.jet > 0:
        P = _lb_right_first(w, Word((g.base(),)), table)
        return P.apply_lambda_plus_partial(LAM, table.derivation, k=g.jet)
    # Right slot is a single jet-0 generator; now reduce the left slot.
    if len(w) > 1:
        head, tail = w.factors[0], Word(w.factors[1:])
        P = _lb_right_first(Word((head,)), v, table)
        first = arrow_insert(P, NCPoly.word(tail), "star1", table.derivation)
        Q = _lb_right_first(tail, v, table)
        second = exp_partial_left(NCPoly.gen(head), Q, table.derivation)
        return first + second
    f = w.factors[0]
    if f.jet > 0:
        P = _lb_right_first(Word((f.base(),)), v, table)
        return P.times_power(LAM, f.jet).scale((-1) ** f.jet)
    return table.value(f, g)


def lb_ext_L(a: NCPoly, t: TensorPoly, table: LambdaBracketTable) -> LambdaPoly:
    """{{a_lam (b x c)}}_L = {{a_lam b}} x c."""
    out = LambdaPoly.zero(t.rank + 1, (LAM,))
    for ws, c in t.items():
        piece = eval_lb(a, NCPoly.word(ws[0]), table).map_coeffs(
            lambda u, _w=ws[1]: u.append_word(_w), rank=t.rank + 1
        )
        out = out + piece.scale(c)
    return out


def lb_ext_R(a: NCPoly, t: TensorPoly, table: LambdaBracketTable) -> LambdaPoly:
    """{{a_lam (b x c)}}_R = b x {{a_lam c}}."""
    out = LambdaPoly.zero(t.rank + 1, (LAM,))
    for ws, c in t.items():
        piece = eval_lb(a, NCPoly.word(ws[-1]), table).map_coeffs(
            lambda u, _w=ws[0]: u.prepend_word(_w), rank=t.rank + 1
        )
        out = out + piece.scale(c)
    return out


def lb_ext_first_L(t: TensorPoly, c: NCPoly, table: LambdaBracketTable) -> LambdaPoly:
    """{{(a x b)_lam c}}_L: arrow-shifted bracket of the first slot, the
    bystander slot inserted in the middle."""
    out = LambdaPoly.zero(3, (LAM,))
    for ws, s in t.items():
        P = eval_lb(NCPoly.word(ws[0]), c, table)
        out = out + arrow_insert(P, NCPoly.word(ws[1]), "otimes1", table.derivation).scale(s)
    return out


def lb_ext(a, t, which: str, table: LambdaBracketTable) -> LambdaPoly:
    """Dispatcher over the three extension maps: ``L``, ``R``, ``firstL``."""
    if which == "L":
        return lb_ext_L(a, t, table)
    if which == "R":
        return lb_ext_R(a, t, table)
    if which == "firstL":
        return lb_ext_first_L(a, t, table)
    raise RankError(f"unknown extension {which!r}")


def skew_residual(a: NCPoly, b: NCPoly, table: LambdaBracketTable) -> LambdaPoly:
    """Residual of skewsymmetry {{a_lam b}} + {{b_(-lam-d) a}}^sigma."""
    lhs = eval_lb(a, b, table)
    rhs = lambda_shift_total(eval_lb(b, a, table), LAM, -1, table.derivation)
    rhs = rhs.map_coeffs(lambda t: t.sigma(SWAP))
    return lhs + rhs


def jacobi_residual(a: NCPoly, b: NCPoly, c: NCPoly, table: LambdaBracketTable) -> LambdaPoly:
    """Jacobi residual through the extension machinery.

    Computes {{a_lam {{b_mu c}}}}_L - {{b_mu {{a_lam c}}}}_R
    - {{{{a_lam b}}_(lam+mu) c}}_L as a rank-3 polynomial in (lam, mu).
    """
    vars2 = (LAM, MU)
    out = LambdaPoly.zero(3, vars2)

    inner_bc = eval_lb(b, c, table)
    for (q,), t in inner_bc.items():
        piece = lb_ext_L(a, t, table)  # polynomial in lam
        out = out + piece.with_vars(vars2).times_power(MU, q)

    inner_ac = eval_lb(a, c, table)
    for (p,), t in inner_ac.items():
        piece = lb_ext_R(b, t, table).rename_var(LAM, MU)  # outer variable is mu
        out = out - piece.with_vars(vars2).times_power(LAM, p)

    inner_ab = eval_lb(a, b, table)
    for (p,), t in inner_ab.items():
        piece = lb_ext_first_L(t, c, table)  # univariate in the outer variable
        expanded = piece.subst_var_to_sum(LAM, LAM, MU)
        out = out - expanded.times_power(LAM, p)
    return out


def jacobi_residual_expanded(a: NCPoly, b: NCPoly, c: NCPoly, table: LambdaBracketTable) -> LambdaPoly:
    """Jacobi residual through the fully expanded coefficient form.

    Independent of the extension machinery: nested Sweedler sums with the
    multinomial ``(lam+mu+d)^q`` action on the middle slot of the third term.
    """
    vars2 = (LAM, MU)
    out = LambdaPoly.zero(3, vars2)

    for (q,), t_bc in eval_lb(b, c, table).items():
        for (w1, w2), s in t_bc.items():
            for (p,), t_a in eval_lb(a, NCPoly.word(w1), table).items():
                contrib = TensorPoly(
                    3, (((u1, u2, w2), cu * s) for (u1, u2), cu in t_a.items())
                )
                out = out + LambdaPoly.monomial(contrib, (p, q), vars2)

    for (p,), t_ac in eval_lb(a, c, table).items():
        for (w1, w2), s in t_ac.items():
            for (q,), t_b in eval_lb(b, NCPoly.word(w2), table).items():
                contrib = TensorPoly(
                    3, (((w1, u1, u2), cu * s) for (u1, u2), cu in t_b.items())
                )
                out = out - LambdaPoly.monomial(contrib, (p, q), vars2)

    deriv = table.derivation
    for (p,), t_ab in eval_lb(a, b, table).items():
        for (w1, w2), s in t_ab.items():
            for (q,), t_x in eval_lb(NCPoly.word(w1), c, table).items():
                # middle slot receives (lam+mu+d)^q w2, multinomial expansion
                dk_w2 = NCPoly.word(w2)
                for k in range(q + 1):
                    if k > 0:
                        dk_w2 = deriv.derive(dk_w2)
                    if dk_w2.is_zero:
                        break
                    for i in range(q - k + 1):
                        j = q - k - i
                        count = comb(q, k) * comb(q - k, i)
                        contrib = TensorPoly.zero(3)
                        for (u1, u2), cu in t_x.items():
                            for wm, cm in dk_w2.items():
                                contrib = contrib + TensorPoly(
                                    3, [((u1, wm, u2), cu * cm * s * count)]
                                )
                        out = out - LambdaPoly.monomial(contrib, (p + i, j), vars2)
    return out


def sesquilinearity_residuals(
    p: NCPoly, q: NCPoly, table: LambdaBracketTable
) -> tuple[LambdaPoly, LambdaPoly]:
    """Left: {{dp_lam q}} + lam {{p_lam q}}; right: {{p_lam dq}} - (lam+d){{p_lam q}}."""
    deriv = table.derivation
    base = eval_lb(p, q, table)
    left = eval_lb(deriv.derive(p), q, table) + base.times_power(LAM, 1)
    right = eval_lb(p, deriv.derive(q), table) - base.apply_lambda_plus_partial(LAM, deriv)
    return left, right


def check_sesquilinearity(table: LambdaBracketTable, seed: int = 0, samples: int = 32) -> Report:
    report = Report("lambda-bracket-sesquilinearity")
    rng = make_rng(seed)
    checked = 0
    candidates: list[tuple[NCPoly, NCPoly]] = []
    for x in table.gens:
        for y in table.gens:
            candidates.append((NCPoly.gen(x), NCPoly.gen(y)))
    for _ in range(samples):
        candidates.append(
            (
                random_jet_poly(rng, table.a_gens, table.e_gens),
                random_jet_poly(rng, table.a_gens, table.e_gens),
            )
        )
    for p, q in candidates:
        left, right = sesquilinearity_residuals(p, q, table)
        checked += 1
        if not left.is_zero:
            report.add_fail("sesquilinearity-left", "sesquilinearity", f"({p},{q})", str(left))
        if not right.is_zero:
            report.add_fail("sesquilinearity-right", "sesquilinearity", f"({p},{q})", str(right))
    if report.ok:
        report.add_pass("sesquilinearity", "sesquilinearity", f"{checked} instances")
    return report


def check_skew(table: LambdaBracketTable, seed: int = 0, samples: int = 64) -> Report:
    report = Report("lambda-bracket-skew")
    checked = 0
    rng = make_rng(seed)
    pairs: list[tuple[NCPoly, NCPoly]] = []
    for x in table.gens:
        for y in table.gens:
            pairs.append((NCPoly.gen(x), NCPoly.gen(y)))
    for _ in range(samples):
        pairs.append(
            (
                random_jet_poly(rng, table.a_gens, table.e_gens),
                random_jet_poly(rng, table.a_gens, table.e_gens),
            )
        )
    for p, q in pairs:
        r = skew_residual(p, q, table)
        checked += 1
        if not r.is_zero:
            report.add_fail("skew", "skewsymmetry", f"({p},{q})", str(r))
    if report.ok:
        report.add_pass("skew", "skewsymmetry", f"{checked} instances")
    return report


def check_jacobi(table: LambdaBracketTable, seed: int = 0, samples: int = 64) -> Report:
    report = Report("lambda-bracket-jacobi")
    checked = 0
    triples: list[tuple[NCPoly, NCPoly, NCPoly]] = []
    for x in table.gens:
        for y in table.gens:
            for z in table.gens:
                triples.append((NCPoly.gen(x), NCPoly.gen(y), NCPoly.gen(z)))
    rng = make_rng(seed)
    for _ in range(samples):
        triples.append(
            (
                random_jet_poly(rng, table.a_gens, table.e_gens),
                random_jet_poly(rng, table.a_gens, table.e_gens),
                random_jet_poly(rng, table.a_gens, table.e_gens),
            )
        )
    for pa, pb, pc in triples:
        direct = jacobi_residual(pa, pb, pc, table)
        expanded = jacobi_residual_expanded(pa, pb, pc, table)
        checked += 1
        if direct != expanded:
            report.add_fail(
                "jacobi-forms-agree",
                "jacobi-expanded",
                f"({pa},{pb},{pc})",
                str(direct - expanded),
            )
        if not direct.is_zero:
            report.add_fail("jacobi", "jacobi", f"({pa},{pb},{pc})", str(direct))
    if report.ok:
        report.add_pass("jacobi", "jacobi", f"{checked} instances")
        report.add_pass("jacobi-forms-agree", "jacobi-expanded", f"{checked} instances")
    return report


def check_grading(table: LambdaBracketTable) -> Report:
    """Weight bookkeeping: the lam^p coefficient of a generator-pair value is
    homogeneous of weight wt(x)+wt(y)-p-1."""
    report = Report("lambda-bracket-grading")
    bad = 0
    for x in table.gens:
        for y in table.gens:
            P = table.value(x, y)
            base = x.weight + y.weight - 1
            for (p,), t in P.items():
                want = base - p
                if want < 0 or not t.is_homogeneous(want):
                    bad += 1
                    report.add_fail(
                        "grading", "weight-grading", f"({x},{y}) at lam^{p}", str(t)
                    )
    if not bad:
        report.add_pass("grading", "weight-grading", f"{len(table.gens) ** 2} entries")
    return report


def check_dpva(table: LambdaBracketTable, seed: int = 0, samples: int = 64) -> Report:
    """Aggregate suite: sesquilinearity, skewsymmetry, Jacobi, grading."""
    report = Report("dpva")
    report.merge(check_sesquilinearity(table, seed=seed, samples=max(8, samples // 4)))
    report.merge(check_skew(table, seed=seed, samples=samples))
    report.merge(check_jacobi(table, seed=seed, samples=max(8, samples // 4)))
    if table.graded:
        report.merge(check_grading(table))
    return report
