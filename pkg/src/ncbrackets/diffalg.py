"""Derivations and lambda-polynomial calculus on the free differential algebra.

The ambient algebra is freely generated in weights 0 and 1: A-sort symbols in
weight 0, E-sort symbols in weight 1, and formal jets of the E-sort symbols
in higher weights.  The degree-1 derivation acts by

* an A-sort generator maps to its image under the derivation table (an
  element of weight 1, jet-free) -- A-jets are substituted immediately and
  never materialized;
* an E-sort jet symbol gets its jet order raised by one;
* words extend by the Leibniz rule, tensors slotwise.

``LambdaPoly`` is a polynomial in the formal variables ``lam`` (and ``mu``)
whose coefficients are tensors of one common rank.  It supports the two
operator moves the bracket calculus needs: substituting
``lam -> sign*(lam + d)`` with the derivative expanded binomially onto whole
coefficients, and multiplying by the operator ``(lam + d)``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

from .errors import LambdaCapError, MissingGeneratorError, RankError, SortError, WeightError
from .ncpoly import (
    A_SORT,
    E_SORT,
    CoeffLike,
    GenSym,
    NCPoly,
    TensorPoly,
    Word,
    as_coeff,
    render_terms,
)

LAM = "lam"
MU = "mu"

_lambda_cap = 8


def get_lambda_cap() -> int:
    return _lambda_cap


def set_lambda_cap(cap: int) -> None:
    global _lambda_cap
    if cap < 1:
        raise LambdaCapError("lambda cap must be positive")
    _lambda_cap = cap


class DerivationTable:
    """Images of the A-sort generators under the weight-1 derivation.

    ``domain`` is the set of declared A-sort generators; declared generators
    without an explicit image map to zero, undeclared ones are an error.
    Zero images are dropped so that equality of tables is normalized.
    """

    def __init__(self, images: Mapping[GenSym, NCPoly], domain: Iterable[GenSym] = ()):
        for sym, img in images.items():
            if sym.sort != A_SORT or sym.jet != 0:
                raise SortError(f"derivation table keys must be jet-0 A-sort symbols, got {sym}")
            if not img.is_homogeneous(1):
                raise WeightError(f"derivation image of {sym} must be homogeneous of weight 1")
            if any(f.jet > 0 for f in img.symbols()):
                raise SortError(f"derivation image of {sym} must not contain jet symbols")
        self._images = {sym: img for sym, img in images.items() if not img.is_zero}
        self.domain = frozenset(images) | frozenset(domain)
        self._word_cache: dict[Word, NCPoly] = {}

    def a_symbols(self) -> tuple[GenSym, ...]:
        return tuple(sorted(self.domain, key=GenSym.key))

    def image(self, sym: GenSym) -> NCPoly:
        if sym.sort == E_SORT:
            return NCPoly.gen(sym.raised())
        img = self._images.get(sym)
        if img is not None:
            return img
        if sym in self.domain:
            return NCPoly.zero()
        raise MissingGeneratorError(f"no derivation image for A-sort generator {sym}")

    def derive_word(self, w: Word) -> NCPoly:
        """Leibniz derivative of a single word; kills the unit."""
        cached = self._word_cache.get(w)
        if cached is not None:
            return cached
        out = NCPoly.zero()
        for i, f in enumerate(w.factors):
            left = NCPoly.word(Word(w.factors[:i]))
            right = NCPoly.word(Word(w.factors[i + 1:]))
            out = out + left * self.image(f) * right
        self._word_cache[w] = out
        return out

    def derive(self, p: NCPoly) -> NCPoly:
        out = NCPoly.zero()
        for w, c in p.items():
            out = out + self.derive_word(w).scale(c)
        return out

    def derive_n(self, p: NCPoly, n: int) -> NCPoly:
        for _ in range(n):
            if p.is_zero:
                break
            p = self.derive(p)
        return p

    def derive_tensor(self, t: TensorPoly) -> TensorPoly:
        """Total derivative: the derivation applied to each slot in turn."""
        out = TensorPoly.zero(t.rank)
        for i in range(t.rank):
            out = out + self.derive_tensor_slot(t, i)
        return out

    def derive_tensor_slot(self, t: TensorPoly, slot: int) -> TensorPoly:
        """The derivation applied to one slot only."""
        out = TensorPoly.zero(t.rank)
        for ws, c in t.items():
            di = self.derive_word(ws[slot])
            for w, cw in di.items():
                out = out + TensorPoly(t.rank, [(ws[:slot] + (w,) + ws[slot + 1:], c * cw)])
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DerivationTable)
            and self._images == other._images
            and self.domain == other.domain
        )

    def items(self):
        return sorted(self._images.items(), key=lambda kv: kv[0].key())


def d(p: NCPoly, table: DerivationTable) -> NCPoly:
    """The derivation on the free differential algebra."""
    return table.derive(p)


def d_tensor(t: TensorPoly, table: DerivationTable) -> TensorPoly:
    """Slotwise (total) derivative of a tensor."""
    return table.derive_tensor(t)


ExpKey = tuple  # tuple[int, ...] exponents, parallel to vars


class LambdaPoly:
    """Polynomial in ``lam``/``mu`` with tensor coefficients of one rank."""

    __slots__ = ("rank", "vars", "_coeffs")

    def __init__(
        self,
        rank: int,
        vars: tuple[str, ...] = (LAM,),
        coeffs: Mapping[ExpKey, TensorPoly] | Iterable[tuple[ExpKey, TensorPoly]] = (),
    ):
        pairs = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self.rank = rank
        self.vars = tuple(vars)
        acc: dict[ExpKey, TensorPoly] = {}
        for exps, t in pairs:
            exps = tuple(exps)
            if len(exps) != len(self.vars):
                raise LambdaCapError(f"exponent tuple {exps} does not match variables {self.vars}")
            if any(e < 0 for e in exps):
                raise LambdaCapError(f"negative exponent in {exps}")
            if any(e > _lambda_cap for e in exps):
                raise LambdaCapError(
                    f"lambda degree {max(exps)} exceeds the configured cap {_lambda_cap}"
                )
            if t.rank != rank:
                raise RankError(f"coefficient rank {t.rank} does not match {rank}")
            if t.is_zero:
                continue
            prev = acc.get(exps)
            s = t if prev is None else prev + t
            if s.is_zero:
                acc.pop(exps, None)
            else:
                acc[exps] = s
        self._coeffs = acc

    @staticmethod
    def zero(rank: int, vars: tuple[str, ...] = (LAM,)) -> "LambdaPoly":
        return LambdaPoly(rank, vars)

    @staticmethod
    def const(t: TensorPoly, vars: tuple[str, ...] = (LAM,)) -> "LambdaPoly":
        return LambdaPoly(t.rank, vars, [((0,) * len(vars), t)])

    @staticmethod
    def monomial(t: TensorPoly, exps: ExpKey, vars: tuple[str, ...] = (LAM,)) -> "LambdaPoly":
        return LambdaPoly(t.rank, vars, [(tuple(exps), t)])

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def items(self) -> list[tuple[ExpKey, TensorPoly]]:
        return sorted(self._coeffs.items(), key=lambda kv: kv[0])

    def coefficient(self, exps: ExpKey) -> TensorPoly:
        return self._coeffs.get(tuple(exps), TensorPoly.zero(self.rank))

    def degree(self, var: str | None = None) -> int:
        if not self._coeffs:
            return 0
        if var is None:
            return max(sum(e) for e in self._coeffs)
        i = self.vars.index(var)
        return max(e[i] for e in self._coeffs)

    def _check_compat(self, other: "LambdaPoly") -> None:
        if self.rank != other.rank:
            raise RankError(f"rank mismatch: {self.rank} vs {other.rank}")
        if self.vars != other.vars:
            raise LambdaCapError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        self._check_compat(other)
        return LambdaPoly(
            self.rank, self.vars, itertools.chain(self._coeffs.items(), other._coeffs.items())
        )

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(self.rank, self.vars, ((e, -t) for e, t in self._coeffs.items()))

    def scale(self, c: CoeffLike) -> "LambdaPoly":
        c = as_coeff(c)
        return LambdaPoly(self.rank, self.vars, ((e, t.scale(c)) for e, t in self._coeffs.items()))

    def __mul__(self, other) -> "LambdaPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LambdaPoly)
            and self.rank == other.rank
            and self.vars == other.vars
            and self._coeffs == other._coeffs
        )

    def times_power(self, var: str, k: int) -> "LambdaPoly":
        i = self.vars.index(var)
        return LambdaPoly(
            self.rank,
            self.vars,
            ((e[:i] + (e[i] + k,) + e[i + 1:], t) for e, t in self._coeffs.items()),
        )

    def map_coeffs(self, fn: Callable[[TensorPoly], TensorPoly], rank: int | None = None) -> "LambdaPoly":
        mapped = [(e, fn(t)) for e, t in self._coeffs.items()]
        new_rank = rank
        if new_rank is None:
            new_rank = mapped[0][1].rank if mapped else self.rank
        return LambdaPoly(new_rank, self.vars, mapped)

    def with_vars(self, vars: tuple[str, ...]) -> "LambdaPoly":
        """Reinterpret into a superset variable tuple (missing exponents 0)."""
        positions = [vars.index(v) for v in self.vars]
        out = []
        for e, t in self._coeffs.items():
            exps = [0] * len(vars)
            for pos, val in zip(positions, e):
                exps[pos] = val
            out.append((tuple(exps), t))
        return LambdaPoly(self.rank, vars, out)

    def rename_var(self, old: str, new: str) -> "LambdaPoly":
        vars = tuple(new if v == old else v for v in self.vars)
        return LambdaPoly(self.rank, vars, self._coeffs.items())

    def subst_affine(self, var: str, sign: int, table: DerivationTable) -> "LambdaPoly":
        """Substitute ``var -> sign*(var + d)``, the derivative acting on
        whole coefficients, ``(var + d)^p`` expanded binomially."""
        if sign not in (1, -1):
            raise LambdaCapError("sign must be +1 or -1")
        i = self.vars.index(var)
        out = LambdaPoly.zero(self.rank, self.vars)
        for e, t in self._coeffs.items():
            p = e[i]
            signed = t.scale(Fraction(sign) ** p)
            dj = signed
            for j in range(p + 1):
                if j > 0:
                    dj = table.derive_tensor(dj)
                if dj.is_zero:
                    break
                exps = e[:i] + (p - j,) + e[i + 1:]
                out = out + LambdaPoly.monomial(dj.scale(comb(p, j)), exps, self.vars)
        return out

    def apply_lambda_plus_partial(self, var: str, table: DerivationTable, k: int = 1) -> "LambdaPoly":
        """Multiply by the operator ``(var + d)`` ``k`` times."""
        out = self
        for _ in range(k):
            out = out.times_power(var, 1) + out.map_coeffs(table.derive_tensor)
        return out

    def subst_var_to_sum(self, var: str, var_a: str, var_b: str) -> "LambdaPoly":
        """Substitute ``var -> var_a + var_b`` (binomial expansion, no derivative).

        The result's variables are ``(var_a, var_b)``; the operand must be
        univariate in ``var``.
        """
        if self.vars != (var,):
            raise LambdaCapError(f"expected a univariate polynomial in {var}")
        out = LambdaPoly.zero(self.rank, (var_a, var_b))
        for (p,), t in self._coeffs.items():
            for i in range(p + 1):
                out = out + LambdaPoly.monomial(t.scale(comb(p, i)), (i, p - i), (var_a, var_b))
        return out

    def total_weight_by_degree(self) -> dict[ExpKey, int | None]:
        return {e: t.total_weight() for e, t in self._coeffs.items()}

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for e, t in self.items():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k > 0
            )
            body = str(t)
            if mono:
                body = f"({body})*{mono}"
            pieces.append(body)
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"LambdaPoly[{self.rank};{','.join(self.vars)}]({self})"


def lambda_shift_total(P: LambdaPoly, var: str, sign: int, table: DerivationTable) -> LambdaPoly:
    """Total substitution ``var -> sign*(var + d)`` on a lambda-polynomial."""
    return P.subst_affine(var, sign, table)


def arrow_insert(P: LambdaPoly, b: NCPoly, mode: str, table: DerivationTable) -> LambdaPoly:
    """Evaluate ``P`` at ``var + d`` with the derivative thrown onto ``b``,
    inserting ``d^j b`` per coefficient.

    For a coefficient ``c' x c''`` at ``var^p`` the contribution at
    ``var^(p-j)`` is ``binom(p,j)`` times ``(c' * d^j b) x c''`` in mode
    ``star1`` (the 1-jump right action) or ``c' x d^j b x c''`` in mode
    ``otimes1`` (middle-slot insertion).
    """
    if P.rank != 2:
        raise RankError("arrow insertion requires rank-2 coefficients")
    if len(P.vars) != 1:
        raise LambdaCapError("arrow insertion expects a univariate polynomial")
    if mode not in ("star1", "otimes1"):
        raise RankError(f"unknown arrow mode {mode!r}")
    out_rank = 2 if mode == "star1" else 3
    out = LambdaPoly.zero(out_rank, P.vars)
    for (p,), t in P.items():
        dj_b = b
        for j in range(p + 1):
            if j > 0:
                dj_b = table.derive(dj_b)
            if dj_b.is_zero:
                break
            if mode == "star1":
                piece = t.star_right(dj_b, 1)
            else:
                piece = t.insert_middle(dj_b)
            out = out + LambdaPoly.monomial(piece.scale(comb(p, j)), (p - j,), P.vars)
    return out


def exp_partial_left(a: NCPoly, P: LambdaPoly, table: DerivationTable) -> LambdaPoly:
    """Evaluate ``P`` at ``var + d`` with the derivative thrown onto ``a``,
    inserted by the 1-jump left action: coefficient ``c' x c''`` at ``var^p``
    contributes ``binom(p,j) c' x (d^j a * c'')`` at ``var^(p-j)``."""
    if P.rank != 2:
        raise RankError("this insertion requires rank-2 coefficients")
    if len(P.vars) != 1:
        raise LambdaCapError("this insertion expects a univariate polynomial")
    out = LambdaPoly.zero(2, P.vars)
    for (p,), t in P.items():
        dj_a = a
        for j in range(p + 1):
            if j > 0:
                dj_a = table.derive(dj_a)
            if dj_a.is_zero:
                break
            piece = t.star_left(dj_a, 1)
            out = out + LambdaPoly.monomial(piece.scale(comb(p, j)), (p - j,), P.vars)
    return out
