"""Presentation files: parse and print structure definitions.

A presentation is sectioned plain text with ``#`` comments::

    [options]
    kind = dcd
    seed = 0

    [generators]
    x : A
    u : E
    v : E

    [derivation]
    d(x) = u

    [pairing]
    <u,v> = 1 ox 1
    <v,u> = 1 ox 1

    [bracket]
    {u,v} = u ox 1 - 1 ox u

Expressions use identifiers, rational literals, ``+ - * ^``, ``d(...)`` for
the derivation, ``ox`` for the tensor product, ``lam`` for the bracket
variable and parentheses; whitespace is insignificant.  Printing emits a
normalized presentation that parses back to an equal structure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .dcd import CDBracketTable, DCDStructure, PairingTable
from .diffalg import LAM, DerivationTable, LambdaPoly
from .double_bracket import DoubleBracketTable
from .dpva import LambdaBracketTable
from .errors import EngineError, PresentationError
from .ncpoly import A_SORT, E_SORT, GenSym, NCPoly, TensorPoly, Word, a_gen, e_gen

KINDS = ("double-poisson", "dpva", "dcd")
SECTIONS = ("options", "generators", "derivation", "pairing", "bracket")


@dataclass
class Options:
    kind: str = "dcd"
    seed: int = 0
    samples: int = 16
    n: int = 1
    graded: bool = True
    lambda_cap: int = 8
    convention: str = "paper"

    def merged(self, **overrides) -> "Options":
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes)


@dataclass
class Presentation:
    options: Options
    a_gens: tuple[GenSym, ...]
    e_gens: tuple[GenSym, ...]
    derivation: DerivationTable
    pairing_entries: dict
    bracket_entries: dict

    def structure(self):
        """Build the checked table object for this presentation's kind."""
        kind = self.options.kind
        if kind == "double-poisson":
            entries = {k: v.constant_tensor() for k, v in self.bracket_entries.items()}
            return DoubleBracketTable(self.a_gens, entries)
        if kind == "dpva":
            entries = {k: v.lambda_poly() for k, v in self.bracket_entries.items()}
            return LambdaBracketTable(
                self.a_gens, self.e_gens, self.derivation, entries, graded=self.options.graded
            )
        if kind == "dcd":
            pairing = PairingTable(
                self.e_gens, {k: v.constant_tensor() for k, v in self.pairing_entries.items()}
            )
            bracket = CDBracketTable(
                self.e_gens,
                {k: CDBracketTable.split(v.constant_tensor()) for k, v in self.bracket_entries.items()},
            )
            return DCDStructure(self.a_gens, self.e_gens, self.derivation, pairing, bracket)
        raise PresentationError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Expression values and parsing.

TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),=]))"
)


def tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PresentationError(f"unexpected character {stripped[0]!r}", line, pos + 1)
        if m.lastgroup == "int":
            tokens.append(("int", m.group("int"), m.start("int") + 1))
        elif m.lastgroup == "name":
            name = m.group("name")
            kind = "ox" if name == "ox" else "name"
            tokens.append((kind, name, m.start("name") + 1))
        else:
            tokens.append(("op", m.group("op"), m.start("op") + 1))
        pos = m.end()
    return tokens


class ExprValue:
    """Rank-tagged intermediate value: a lambda-polynomial whose terms are
    word tuples of the given rank (rank 0 for scalars)."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict):
        # terms: (lam_exp, words) -> Fraction
        self.rank = rank
        self.terms = {k: c for k, c in terms.items() if c != 0}

    @staticmethod
    def scalar(c: Fraction, lam_exp: int = 0) -> "ExprValue":
        return ExprValue(0, {(lam_exp, ()): c})

    @staticmethod
    def of_poly(p: NCPoly) -> "ExprValue":
        return ExprValue(1, {(0, (w,)): c for w, c in p.items()})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "ExprValue", line: int) -> "ExprValue":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.rank != other.rank:
            raise PresentationError(
                f"cannot add values of tensor rank {self.rank} and {other.rank}", line
            )
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return ExprValue(self.rank, out)

    def neg(self) -> "ExprValue":
        return ExprValue(self.rank, {k: -c for k, c in self.terms.items()})

    def mul(self, other: "ExprValue", line: int) -> "ExprValue":
        if self.is_zero or other.is_zero:
            return ExprValue(0, {})
        if self.rank > 1 and other.rank > 1:
            raise PresentationError("'*' requires at most one factor of tensor rank > 1", line)
        if self.rank > 1 or other.rank > 1:
            # Scalar times tensor only; products into tensor slots are not
            # part of the grammar.
            if self.rank > 1 and other.rank != 0:
                raise PresentationError("a tensor can only be scaled here", line)
            if other.rank > 1 and self.rank != 0:
                raise PresentationError("a tensor can only be scaled here", line)
        out: dict = {}
        rank = self.rank + other.rank if (self.rank <= 1 and other.rank <= 1) else max(self.rank, other.rank)
        for (e1, ws1), c1 in self.terms.items():
            for (e2, ws2), c2 in other.terms.items():
                if self.rank == 1 and other.rank == 1:
                    words = (ws1[0] * ws2[0],)
                else:
                    words = ws1 + ws2
                key = (e1 + e2, words)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        final_rank = 1 if (self.rank == 1 and other.rank == 1) else rank
        return ExprValue(final_rank, out)

    def promote(self) -> "ExprValue":
        """View a scalar as a multiple of the unit word."""
        if self.rank != 0:
            return self
        return ExprValue(1, {(e, (Word(),)): c for (e, _), c in self.terms.items()})

    def tensor(self, other: "ExprValue", line: int) -> "ExprValue":
        if self.is_zero or other.is_zero:
            return ExprValue(0, {})
        self, other = self.promote(), other.promote()
        rank = self.rank + other.rank
        if rank > 3:
            raise PresentationError(f"tensor rank {rank} exceeds 3", line)
        out: dict = {}
        for (e1, ws1), c1 in self.terms.items():
            for (e2, ws2), c2 in other.terms.items():
                key = (e1 + e2, ws1 + ws2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ExprValue(rank, out)

    def ncpoly(self, line: int) -> NCPoly:
        if self.is_zero:
            return NCPoly.zero()
        if self.rank > 1:
            raise PresentationError(f"expected a plain element, got rank {self.rank}", line)
        if any(e for (e, _) in self.terms):
            raise PresentationError("unexpected bracket variable here", line)
        if self.rank == 0:
            return NCPoly([(Word(), c) for (_, _ws), c in self.terms.items()])
        return NCPoly([(ws[0], c) for (_, ws), c in self.terms.items()])

    def constant_tensor(self, rank: int = 2) -> TensorPoly:
        if self.is_zero:
            return TensorPoly.zero(rank)
        if self.rank != rank:
            raise PresentationError(f"expected a rank-{rank} tensor, got rank {self.rank}")
        if any(e for (e, _) in self.terms):
            raise PresentationError("bracket variable is not allowed in this table")
        return TensorPoly(rank, ((ws, c) for (_, ws), c in self.terms.items()))

    def lambda_poly(self, rank: int = 2) -> LambdaPoly:
        if self.is_zero:
            return LambdaPoly.zero(rank, (LAM,))
        if self.rank != rank:
            raise PresentationError(f"expected a rank-{rank} tensor, got rank {self.rank}")
        coeffs: dict = {}
        for (e, ws), c in self.terms.items():
            t = coeffs.get(e, TensorPoly.zero(rank))
            coeffs[e] = t + TensorPoly(rank, [(ws, c)])
        return LambdaPoly(rank, (LAM,), (((e,), t) for e, t in coeffs.items()))


class ExprParser:
    def __init__(self, tokens, line: int, env: dict[str, GenSym], derivation: Callable[[NCPoly], NCPoly]):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.env = env
        self.derivation = derivation

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "", -1)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, col = self.next()
        if kind != "op" or val != op:
            raise PresentationError(f"expected {op!r}, got {val!r}", self.line, col)

    def parse(self) -> ExprValue:
        value = self.parse_sum()
        kind, val, col = self.peek()
        if kind != "end":
            raise PresentationError(f"unexpected token {val!r}", self.line, col)
        return value

    def parse_sum(self) -> ExprValue:
        value = self.parse_tensor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_tensor()
                value = value.add(rhs.neg() if val == "-" else rhs, self.line)
            else:
                return value

    def parse_tensor(self) -> ExprValue:
        value = self.parse_product()
        while self.peek()[0] == "ox":
            self.next()
            value = value.tensor(self.parse_product(), self.line)
        return value

    def parse_product(self) -> ExprValue:
        value = self.parse_power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                value = value.mul(self.parse_power(), self.line)
            else:
                return value

    def parse_power(self) -> ExprValue:
        value = self.parse_atom()
        kind, val, col = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, col = self.next()
            if kind != "int":
                raise PresentationError("exponent must be a nonnegative integer", self.line, col)
            n = int(val)
            out = ExprValue.scalar(Fraction(1))
            for _ in range(n):
                out = out.mul(value, self.line)
            return out
        return value

    def parse_atom(self) -> ExprValue:
        kind, val, col = self.next()
        if kind == "op" and val == "-":
            return self.parse_atom().neg()
        if kind == "op" and val == "(":
            inner = self.parse_sum()
            self.expect_op(")")
            return inner
        if kind == "int":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.next()
                k3, v3, c3 = self.next()
                if k3 != "int":
                    raise PresentationError("malformed rational literal", self.line, c3)
                return ExprValue.scalar(Fraction(num, int(v3)))
            return ExprValue.scalar(Fraction(num))
        if kind == "name":
            if val == "lam":
                return ExprValue.scalar(Fraction(1), lam_exp=1)
            if val == "d":
                self.expect_op("(")
                inner = self.parse_sum()
                self.expect_op(")")
                p = inner.ncpoly(self.line)
                try:
                    return ExprValue.of_poly(self.derivation(p))
                except EngineError as exc:
                    raise PresentationError(str(exc), self.line, col) from exc
            sym = self.env.get(val)
            if sym is None:
                raise PresentationError(f"unknown generator {val!r}", self.line, col)
            return ExprValue.of_poly(NCPoly.gen(sym))
        raise PresentationError(f"unexpected token {val!r}", self.line, col)


def parse_expression(
    text: str, line: int, env: dict[str, GenSym], derivation: Callable[[NCPoly], NCPoly]
) -> ExprValue:
    return ExprParser(tokenize(text, line), line, env, derivation).parse()


# ---------------------------------------------------------------------------
# Presentation parsing.

_GEN_LINE = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*:\s*(?P<sort>[AE])$")
_DERIV_LINE = re.compile(r"^d\(\s*(?P<name>[A-Za-z_][A-Za-z_0-9]*)\s*\)\s*=\s*(?P<expr>.*)$")
_PAIR_LINE = re.compile(
    r"^<\s*(?P<a>[A-Za-z_][A-Za-z_0-9]*)\s*,\s*(?P<b>[A-Za-z_][A-Za-z_0-9]*)\s*>\s*=\s*(?P<expr>.*)$"
)
_BRACKET_LINE = re.compile(
    r"^\{\s*(?P<a>[A-Za-z_][A-Za-z_0-9]*)\s*,\s*(?P<b>[A-Za-z_][A-Za-z_0-9]*)\s*\}\s*=\s*(?P<expr>.*)$"
)
_OPTION_LINE = re.compile(r"^(?P<key>[A-Za-z_][A-Za-z_0-9]*)\s*=\s*(?P<value>.*)$")


def parse_presentation(text: str) -> Presentation:
    sections: dict[str, list[tuple[int, str]]] = {name: [] for name in SECTIONS}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in sections:
                raise PresentationError(f"unknown section [{name}]", lineno)
            current = name
            continue
        if current is None:
            raise PresentationError("content before the first section header", lineno)
        sections[current].append((lineno, line))

    options = Options()
    for lineno, line in sections["options"]:
        m = _OPTION_LINE.match(line)
        if not m:
            raise PresentationError("malformed option line", lineno)
        key, value = m.group("key").lower(), m.group("value").strip()
        try:
            if key == "kind":
                if value not in KINDS:
                    raise PresentationError(f"unknown kind {value!r}", lineno)
                options.kind = value
            elif key == "seed":
                options.seed = int(value)
            elif key == "samples":
                options.samples = int(value)
            elif key in ("n", "N"):
                options.n = int(value)
            elif key == "graded":
                if value.lower() not in ("true", "false"):
                    raise PresentationError("graded must be true or false", lineno)
                options.graded = value.lower() == "true"
            elif key == "lambda_cap":
                options.lambda_cap = int(value)
            elif key == "convention":
                if value not in ("paper", "vdb"):
                    raise PresentationError(f"unknown convention {value!r}", lineno)
                options.convention = value
            else:
                raise PresentationError(f"unknown option {key!r}", lineno)
        except ValueError:
            raise PresentationError(f"malformed value for option {key!r}", lineno) from None

    env: dict[str, GenSym] = {}
    a_gens: list[GenSym] = []
    e_gens: list[GenSym] = []
    for lineno, line in sections["generators"]:
        m = _GEN_LINE.match(line)
        if not m:
            raise PresentationError("malformed generator declaration", lineno)
        name, sort = m.group("name"), m.group("sort")
        if name in env:
            raise PresentationError(f"duplicate generator {name!r}", lineno)
        if name in ("lam", "mu", "ox", "d"):
            raise PresentationError(f"{name!r} is reserved", lineno)
        sym = a_gen(name) if sort == "A" else e_gen(name)
        env[name] = sym
        (a_gens if sort == "A" else e_gens).append(sym)

    if options.kind == "double-poisson":
        for section in ("derivation", "pairing"):
            if sections[section]:
                raise PresentationError(
                    f"section [{section}] is not allowed for kind double-poisson",
                    sections[section][0][0],
                )
    if options.kind == "dpva" and sections["pairing"]:
        raise PresentationError(
            "section [pairing] is not allowed for kind dpva", sections["pairing"][0][0]
        )

    def no_derivation(p: NCPoly) -> NCPoly:
        raise PresentationError("d(...) is not available before [derivation] is complete")

    images: dict[GenSym, NCPoly] = {}
    for lineno, line in sections["derivation"]:
        m = _DERIV_LINE.match(line)
        if not m:
            raise PresentationError("malformed derivation line, expected d(x) = ...", lineno)
        name = m.group("name")
        sym = env.get(name)
        if sym is None:
            raise PresentationError(f"unknown generator {name!r}", lineno)
        if sym.sort != A_SORT:
            raise PresentationError(f"derivation images are declared on A-sort only", lineno)
        if sym in images:
            raise PresentationError(f"duplicate derivation entry for {name!r}", lineno)
        value = parse_expression(m.group("expr"), lineno, env, no_derivation)
        try:
            images[sym] = value.ncpoly(lineno)
        except EngineError as exc:
            raise PresentationError(str(exc), lineno) from exc
    try:
        derivation = DerivationTable(images, domain=a_gens)
    except EngineError as exc:
        lineno = sections["derivation"][0][0] if sections["derivation"] else None
        raise PresentationError(str(exc), lineno) from exc

    def derive(p: NCPoly) -> NCPoly:
        return derivation.derive(p)

    pairing_entries: dict = {}
    for lineno, line in sections["pairing"]:
        m = _PAIR_LINE.match(line)
        if not m:
            raise PresentationError("malformed pairing line, expected <e,f> = ...", lineno)
        key = _table_key(m, env, lineno, E_SORT)
        if key in pairing_entries:
            raise PresentationError(f"duplicate pairing entry {line!r}", lineno)
        pairing_entries[key] = parse_expression(m.group("expr"), lineno, env, derive)

    bracket_entries: dict = {}
    for lineno, line in sections["bracket"]:
        m = _BRACKET_LINE.match(line)
        if not m:
            raise PresentationError("malformed bracket line, expected {a,b} = ...", lineno)
        want_sort = A_SORT if options.kind == "double-poisson" else None
        key = _table_key(m, env, lineno, want_sort)
        if options.kind == "dcd" and not all(s.sort == E_SORT for s in key):
            raise PresentationError("bracket entries use E-sort generators for this kind", lineno)
        if key in bracket_entries:
            raise PresentationError(f"duplicate bracket entry {line!r}", lineno)
        bracket_entries[key] = parse_expression(m.group("expr"), lineno, env, derive)

    presentation = Presentation(
        options=options,
        a_gens=tuple(a_gens),
        e_gens=tuple(e_gens),
        derivation=derivation,
        pairing_entries=pairing_entries,
        bracket_entries=bracket_entries,
    )
    try:
        presentation.structure()
    except PresentationError:
        raise
    except EngineError as exc:
        raise PresentationError(str(exc)) from exc
    return presentation


def _table_key(m, env, lineno, want_sort):
    out = []
    for group in ("a", "b"):
        name = m.group(group)
        sym = env.get(name)
        if sym is None:
            raise PresentationError(f"unknown generator {name!r}", lineno)
        if want_sort is not None and sym.sort != want_sort:
            raise PresentationError(
                f"generator {name!r} has sort {sym.sort}, expected {want_sort}", lineno
            )
        out.append(sym)
    return tuple(out)


# ---------------------------------------------------------------------------
# Printing.

def _print_options(options: Options) -> list[str]:
    lines = ["[options]", f"kind = {options.kind}"]
    defaults = Options()
    if options.seed != defaults.seed:
        lines.append(f"seed = {options.seed}")
    if options.samples != defaults.samples:
        lines.append(f"samples = {options.samples}")
    if options.n != defaults.n:
        lines.append(f"n = {options.n}")
    if options.kind == "dpva":
        lines.append(f"graded = {'true' if options.graded else 'false'}")
    if options.lambda_cap != defaults.lambda_cap:
        lines.append(f"lambda_cap = {options.lambda_cap}")
    if options.kind == "double-poisson" and options.convention != defaults.convention:
        lines.append(f"convention = {options.convention}")
    return lines


def print_presentation(structure, options: Options) -> str:
    """Normalized presentation text for a table object."""
    lines: list[str] = []
    lines.extend(_print_options(options))
    lines.append("")
    lines.append("[generators]")
    if isinstance(structure, DoubleBracketTable):
        gens = structure.gens
        for g in gens:
            lines.append(f"{g.name} : A")
        lines.append("")
        lines.append("[bracket]")
        for (a, b), t in structure.items():
            lines.append(f"{{{a.name},{b.name}}} = {t}")
        return "\n".join(lines) + "\n"

    if isinstance(structure, LambdaBracketTable):
        a_gens, e_gens = structure.a_gens, structure.e_gens
        derivation = structure.derivation
        table_lines = [f"{{{a.name},{b.name}}} = {P}" for (a, b), P in structure.items()]
        pairing_lines: list[str] = []
    elif isinstance(structure, DCDStructure):
        a_gens, e_gens = structure.a_gens, structure.e_gens
        derivation = structure.derivation
        pairing_lines = [f"<{a.name},{b.name}> = {t}" for (a, b), t in structure.pairing.items()]
        table_lines = [f"{{{a.name},{b.name}}} = {l + r}" for (a, b), (l, r) in structure.bracket.items()]
    else:
        raise EngineError(f"cannot print {type(structure).__name__}")

    for g in a_gens:
        lines.append(f"{g.name} : A")
    for g in e_gens:
        lines.append(f"{g.name} : E")
    lines.append("")
    lines.append("[derivation]")
    for sym, img in derivation.items():
        lines.append(f"d({sym.name}) = {img}")
    if pairing_lines:
        lines.append("")
        lines.append("[pairing]")
        lines.extend(pairing_lines)
    lines.append("")
    lines.append("[bracket]")
    lines.extend(table_lines)
    return "\n".join(lines) + "\n"
