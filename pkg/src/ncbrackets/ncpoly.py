"""Free noncommutative graded polynomials over exact rationals.

Everything downstream is built from four value types:

* ``GenSym`` -- a graded generator symbol.  A-sort symbols have weight 0,
  E-sort symbols weight 1; an E-sort symbol may carry a jet order ``k``
  (the k-th formal derivative), which adds ``k`` to its weight.  A-sort
  symbols never carry jets: their derivatives are substituted away by a
  derivation table (see :mod:`ncbrackets.diffalg`).
* ``Word`` -- a product of generator symbols; the empty word is the unit.
* ``NCPoly`` -- a finite Q-linear combination of words, kept in a canonical
  normal form (no zero coefficients, one global term order).
* ``TensorPoly`` -- a Q-linear combination of word tuples of a fixed rank
  (1, 2 or 3), used for Sweedler sums such as values of double brackets and
  the three-slot Jacobi expressions.

Coefficients are ``fractions.Fraction`` throughout; no floating point enters
the engine.  All values are immutable after construction.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import EngineError, RankError, SlotIndexError, SortError

Coeff = Fraction
CoeffLike = Union[Fraction, int]

A_SORT = "A"
E_SORT = "E"


def as_coeff(value: CoeffLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise EngineError(f"coefficients must be exact rationals, got {type(value).__name__}")


def coeff_str(c: Fraction) -> str:
    return str(c)


class GenSym:
    """A graded generator symbol, optionally with a jet order."""

    __slots__ = ("name", "sort", "jet", "_hash")

    def __init__(self, name: str, sort: str, jet: int = 0):
        if sort not in (A_SORT, E_SORT):
            raise SortError(f"unknown sort {sort!r} for generator {name!r}")
        if not name or not name[0].isalpha():
            raise SortError(f"invalid generator name {name!r}")
        if jet < 0:
            raise SortError(f"negative jet on generator {name!r}")
        if jet > 0 and sort != E_SORT:
            raise SortError(
                f"A-sort generator {name!r} cannot carry a jet; "
                "its derivative is substituted via the derivation table"
            )
        self.name = name
        self.sort = sort
        self.jet = jet
        self._hash = hash((name, sort, jet))

    @property
    def weight(self) -> int:
        base = 0 if self.sort == A_SORT else 1
        return base + self.jet

    def raised(self, k: int = 1) -> "GenSym":
        """The symbol with jet order increased by ``k``."""
        return GenSym(self.name, self.sort, self.jet + k)

    def base(self) -> "GenSym":
        return self if self.jet == 0 else GenSym(self.name, self.sort, 0)

    def key(self):
        return (self.weight, self.name, self.jet)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GenSym)
            and self.name == other.name
            and self.sort == other.sort
            and self.jet == other.jet
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "GenSym") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return "d(" * self.jet + self.name + ")" * self.jet

    def __repr__(self) -> str:
        return f"GenSym({self.name!r}, {self.sort!r}, jet={self.jet})"


def a_gen(name: str) -> GenSym:
    return GenSym(name, A_SORT)


def e_gen(name: str, jet: int = 0) -> GenSym:
    return GenSym(name, E_SORT, jet)


class Word:
    """An ordered product of generator symbols; the empty word is 1."""

    __slots__ = ("factors", "weight", "_key", "_hash")

    def __init__(self, factors: Iterable[GenSym] = ()):
        self.factors = tuple(factors)
        self.weight = sum(f.weight for f in self.factors)
        # Canonical term order: (total weight, length, factor names, jets).
        self._key = (
            self.weight,
            len(self.factors),
            tuple(f.name for f in self.factors),
            tuple(f.jet for f in self.factors),
        )
        self._hash = hash(self.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def key(self):
        return self._key

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[GenSym]:
        return iter(self.factors)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self._key < other._key

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(str(f) for f in self.factors)

    def __repr__(self) -> str:
        return f"Word({self})"


UNIT_WORD = Word()


def normalize_terms(pairs: Iterable[tuple], width: int | None = None) -> dict:
    """Collect coefficients per key and drop zeros.

    ``pairs`` yields ``(key, coefficient)``; this is the single normalization
    path used by every constructor, so applying it twice is a no-op.
    """
    acc: dict = {}
    for key, c in pairs:
        c = as_coeff(c)
        if width is not None and len(key) != width:
            raise RankError(f"term {key} has rank {len(key)}, expected {width}")
        if c == 0:
            continue
        prev = acc.get(key)
        if prev is None:
            acc[key] = c
        else:
            s = prev + c
            if s == 0:
                del acc[key]
            else:
                acc[key] = s
    return acc


class NCPoly:
    """Finite Q-linear combination of words in canonical normal form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, CoeffLike] | Iterable[tuple[Word, CoeffLike]] = ()):
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        self._terms = normalize_terms(pairs)

    @staticmethod
    def zero() -> "NCPoly":
        return NCPoly()

    @staticmethod
    def one() -> "NCPoly":
        return NCPoly([(UNIT_WORD, Fraction(1))])

    @staticmethod
    def scalar(c: CoeffLike) -> "NCPoly":
        return NCPoly([(UNIT_WORD, as_coeff(c))])

    @staticmethod
    def gen(sym: GenSym) -> "NCPoly":
        return NCPoly([(Word((sym,)), Fraction(1))])

    @staticmethod
    def word(w: Word, c: CoeffLike = 1) -> "NCPoly":
        return NCPoly([(w, as_coeff(c))])

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self._terms.items())

    def terms(self) -> list[tuple[Word, Fraction]]:
        """Terms in the canonical order, for deterministic output."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].key())

    def coefficient(self, w: Word) -> Fraction:
        return self._terms.get(w, Fraction(0))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            return NotImplemented
        return NCPoly(itertools.chain(self._terms.items(), other._terms.items()))

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __neg__(self) -> "NCPoly":
        return NCPoly((w, -c) for w, c in self._terms.items())

    def scale(self, c: CoeffLike) -> "NCPoly":
        c = as_coeff(c)
        if c == 0:
            return NCPoly()
        return NCPoly((w, c * s) for w, s in self._terms.items())

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, NCPoly):
            return nc_mul(self, other)
        return NotImplemented

    def __rmul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def weight(self) -> int | None:
        """Common weight of all terms, ``None`` if inhomogeneous or zero."""
        weights = {w.weight for w in self._terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def is_homogeneous(self, weight: int | None = None) -> bool:
        if self.is_zero:
            return True
        w = self.weight()
        if w is None:
            return False
        return weight is None or w == weight

    def max_degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def symbols(self) -> set[GenSym]:
        return {f for w in self._terms for f in w}

    def as_tensor(self) -> "TensorPoly":
        return TensorPoly(1, (((w,), c) for w, c in self._terms.items()))

    def __str__(self) -> str:
        return render_terms(self.terms(), lambda w: str(w))

    def __repr__(self) -> str:
        return f"NCPoly({self})"


def render_terms(terms: Sequence[tuple], key_str: Callable) -> str:
    if not terms:
        return "0"
    parts: list[str] = []
    for key, c in terms:
        body = key_str(key)
        if body == "1":
            piece = coeff_str(abs(c))
        elif abs(c) == 1:
            piece = body
        else:
            piece = f"{coeff_str(abs(c))}*{body}"
        if not parts:
            parts.append(piece if c > 0 else f"-{piece}")
        else:
            parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(parts)


def nc_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Free associative (concatenation) product, extended bilinearly."""
    return NCPoly(
        ((wp * wq, cp * cq) for wp, cp in p.items() for wq, cq in q.items())
    )


WordTuple = tuple  # tuple[Word, ...]


class TensorPoly:
    """Q-linear combination of word tuples of one fixed rank.

    Rank is immutable and mixing ranks in arithmetic is a hard error.  Rank 0
    (scalars) exists only as expression-evaluator plumbing; the algebraic
    operations below require rank 1..3.
    """

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Iterable[tuple[WordTuple, CoeffLike]] = ()):
        if rank < 0 or rank > 3:
            raise RankError(f"unsupported tensor rank {rank}")
        self.rank = rank
        self._terms = normalize_terms(terms, width=rank)

    @staticmethod
    def zero(rank: int) -> "TensorPoly":
        return TensorPoly(rank)

    @staticmethod
    def tensor(*slots: NCPoly) -> "TensorPoly":
        """Slotwise tensor product of rank-1 polynomials."""
        rank = len(slots)
        terms: list[tuple[WordTuple, Fraction]] = []
        for combo in itertools.product(*(list(s.items()) for s in slots)):
            words = tuple(w for w, _ in combo)
            c = Fraction(1)
            for _, ci in combo:
                c *= ci
            terms.append((words, c))
        return TensorPoly(rank, terms)

    @staticmethod
    def from_words(*words: Word) -> "TensorPoly":
        return TensorPoly(len(words), [(tuple(words), Fraction(1))])

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple[WordTuple, Fraction]]:
        return iter(self._terms.items())

    def terms(self) -> list[tuple[WordTuple, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: tuple(w.key() for w in kv[0]))

    def _check_rank(self, other: "TensorPoly") -> None:
        if self.rank != other.rank:
            raise RankError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        if not isinstance(other, TensorPoly):
            return NotImplemented
        self._check_rank(other)
        return TensorPoly(self.rank, itertools.chain(self._terms.items(), other._terms.items()))

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def __neg__(self) -> "TensorPoly":
        return TensorPoly(self.rank, ((ws, -c) for ws, c in self._terms.items()))

    def scale(self, c: CoeffLike) -> "TensorPoly":
        c = as_coeff(c)
        if c == 0:
            return TensorPoly(self.rank)
        return TensorPoly(self.rank, ((ws, c * s) for ws, s in self._terms.items()))

    def __mul__(self, other) -> "TensorPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorPoly)
            and self.rank == other.rank
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._terms.items())))

    def map_slots(self, fn: Callable[[WordTuple], WordTuple]) -> "TensorPoly":
        return TensorPoly(self.rank, ((fn(ws), c) for ws, c in self._terms.items()))

    def star_left(self, a: NCPoly, jumps: int) -> "TensorPoly":
        """Multiply ``a`` from the left into slot ``jumps`` (0-based)."""
        if not 0 <= jumps < self.rank:
            raise SlotIndexError(f"jump count {jumps} out of range for rank {self.rank}")
        terms = []
        for ws, c in self._terms.items():
            for wa, ca in a.items():
                new = ws[:jumps] + (wa * ws[jumps],) + ws[jumps + 1:]
                terms.append((new, c * ca))
        return TensorPoly(self.rank, terms)

    def star_right(self, a: NCPoly, jumps: int) -> "TensorPoly":
        """Multiply ``a`` from the right into slot ``rank-1-jumps`` (0-based)."""
        if not 0 <= jumps < self.rank:
            raise SlotIndexError(f"jump count {jumps} out of range for rank {self.rank}")
        pos = self.rank - 1 - jumps
        terms = []
        for ws, c in self._terms.items():
            for wa, ca in a.items():
                new = ws[:pos] + (ws[pos] * wa,) + ws[pos + 1:]
                terms.append((new, c * ca))
        return TensorPoly(self.rank, terms)

    def sigma(self, perm: Sequence[int]) -> "TensorPoly":
        """Apply the slot permutation ``sigma_s``: slot i receives v_{s^{-1}(i)}.

        ``perm`` lists the images ``s(1), ..., s(n)`` (1-based).
        """
        inv = invert_perm(check_perm(perm, self.rank))
        return self.map_slots(lambda ws: tuple(ws[inv[i - 1] - 1] for i in range(1, self.rank + 1)))

    def sigma_cyclic(self) -> "TensorPoly":
        """The distinguished cyclic rotation (v1 x ... x vn) -> vn x v1 x ... x v_{n-1}."""
        return self.sigma(cyclic_perm(self.rank))

    def concat(self, other: "TensorPoly") -> "TensorPoly":
        """Tensor product, concatenating slots."""
        terms = []
        for ws, c in self._terms.items():
            for vs, d in other._terms.items():
                terms.append((ws + vs, c * d))
        return TensorPoly(self.rank + other.rank, terms)

    def append_word(self, w: Word) -> "TensorPoly":
        return TensorPoly(self.rank + 1, ((ws + (w,), c) for ws, c in self._terms.items()))

    def prepend_word(self, w: Word) -> "TensorPoly":
        return TensorPoly(self.rank + 1, (((w,) + ws, c) for ws, c in self._terms.items()))

    def insert_middle(self, x: NCPoly) -> "TensorPoly":
        """Middle-slot insertion for rank 2; the common core of both jump products."""
        if self.rank != 2:
            raise RankError("middle insertion requires a rank-2 operand")
        terms = []
        for (w1, w2), c in self._terms.items():
            for wx, cx in x.items():
                terms.append(((w1, wx, w2), c * cx))
        return TensorPoly(3, terms)

    def slot_weight_split(self) -> dict[tuple[int, ...], "TensorPoly"]:
        """Group terms by their per-slot weight signature."""
        buckets: dict[tuple[int, ...], list] = {}
        for ws, c in self._terms.items():
            sig = tuple(w.weight for w in ws)
            buckets.setdefault(sig, []).append((ws, c))
        return {sig: TensorPoly(self.rank, terms) for sig, terms in buckets.items()}

    def project(self, signature: tuple[int, ...]) -> "TensorPoly":
        """Terms whose per-slot weights equal ``signature``."""
        return TensorPoly(
            self.rank,
            (
                (ws, c)
                for ws, c in self._terms.items()
                if tuple(w.weight for w in ws) == signature
            ),
        )

    def total_weight(self) -> int | None:
        weights = {sum(w.weight for w in ws) for ws in self._terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def is_homogeneous(self, weight: int | None = None) -> bool:
        if self.is_zero:
            return True
        w = self.total_weight()
        if w is None:
            return False
        return weight is None or w == weight

    def symbols(self) -> set[GenSym]:
        return {f for ws in self._terms for w in ws for f in w}

    def __str__(self) -> str:
        return render_terms(self.terms(), lambda ws: " ox ".join(str(w) for w in ws))

    def __repr__(self) -> str:
        return f"TensorPoly[{self.rank}]({self})"


def star_i(a: NCPoly, t: TensorPoly, i: int, side: str) -> TensorPoly:
    """The i-jump module actions on a tensor power.

    ``side='left'`` multiplies ``a`` into slot ``i+1`` (1-based) from the
    left; ``side='right'`` multiplies into slot ``rank-i`` from the right.
    """
    if side == "left":
        return t.star_left(a, i)
    if side == "right":
        return t.star_right(a, i)
    raise EngineError(f"unknown side {side!r}")


def otimes1(x: NCPoly | TensorPoly, y: NCPoly | TensorPoly) -> TensorPoly:
    """Jump insertion: ``e1 (x)1 (e2 x e3) = e2 x e1 x e3`` and
    ``(e1 x e2) (x)1 e3 = e1 x e3 x e2``, extended bilinearly.

    Exactly one argument must be rank 2, the other rank 1; in both cases the
    rank-1 factor lands in the middle slot.
    """
    xr = 1 if isinstance(x, NCPoly) else x.rank
    yr = 1 if isinstance(y, NCPoly) else y.rank
    if {xr, yr} != {1, 2}:
        raise RankError(f"jump insertion needs ranks {{1,2}}, got {xr} and {yr}")
    if xr == 1:
        single = x if isinstance(x, NCPoly) else _rank1_as_ncpoly(x)
        pair = y
    else:
        single = y if isinstance(y, NCPoly) else _rank1_as_ncpoly(y)
        pair = x
    assert isinstance(pair, TensorPoly)
    return pair.insert_middle(single)


def _rank1_as_ncpoly(t: TensorPoly) -> NCPoly:
    if t.rank != 1:
        raise RankError("expected a rank-1 tensor")
    return NCPoly(((ws[0], c) for ws, c in t.items()))


def apply_sigma(perm: Sequence[int], t: TensorPoly) -> TensorPoly:
    return t.sigma(perm)


def check_perm(perm: Sequence[int], rank: int) -> tuple[int, ...]:
    p = tuple(perm)
    if sorted(p) != list(range(1, rank + 1)):
        raise SlotIndexError(f"{p} is not a permutation of 1..{rank}")
    return p


def invert_perm(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, image in enumerate(perm, start=1):
        inv[image - 1] = i
    return tuple(inv)


def compose_perm(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """The permutation ``s o t`` (apply ``t`` first)."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def cyclic_perm(n: int) -> tuple[int, ...]:
    """The cycle (1 2 ... n), sending 1 to 2."""
    return tuple(i % n + 1 for i in range(1, n + 1))


SIGMA_123 = (2, 3, 1)  # the 3-cycle sending 1 -> 2
SIGMA_132 = (3, 1, 2)  # its inverse
SWAP = (2, 1)


def all_perms(rank: int) -> list[tuple[int, ...]]:
    return [tuple(p) for p in itertools.permutations(range(1, rank + 1))]
