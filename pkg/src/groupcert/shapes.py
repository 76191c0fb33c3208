"""Group-shape expressions such as ``3^{3+2+6+6}:(L3(3) x SD16)`` and their orders.

Precedence, loosest first: direct product (``x`` or ``×``), then extension
(``.``, ``:``, ``·``; left-associative, ``A.B.C = (A.B).C``), then atoms
(parenthesised shapes, numbers with optional ``^k`` / ``^{a+b+...}`` layers,
and catalog names).  Only the order is computed: a shape does not determine
an isomorphism type.
"""

from __future__ import annotations

import difflib
import unicodedata
import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Union

from .families import family_order


class ShapeSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at offset {pos}: {text!r}")


class UnknownGroupError(KeyError):
    def __init__(self, name: str, suggestions: list[str]):
        self.name = name
        self.suggestions = suggestions
        super().__init__(name)

    def __str__(self) -> str:
        hint = f"; nearest catalog names: {', '.join(self.suggestions)}" if self.suggestions else ""
        return f"unknown group name {self.name!r}{hint}"


class ShapeAmbiguityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True)
class Layers:
    """``p^{a1+a2+...}``: iterated elementary abelian (or homocyclic) layers."""

    base: int
    exponents: tuple[int, ...]

    def __str__(self) -> str:
        if len(self.exponents) == 1:
            return f"{self.base}^{self.exponents[0]}"
        return f"{self.base}^{{{'+'.join(map(str, self.exponents))}}}"


@dataclass(frozen=True)
class Named:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Extension:
    normal: "ShapeExpr"
    top: "ShapeExpr"
    kind: str  # '.', ':' or '·'

    def __str__(self) -> str:
        return f"{_wrap(self.normal, Extension)}{self.kind}{_wrap(self.top, Extension, right=True)}"


@dataclass(frozen=True)
class Direct:
    factors: tuple

    def __str__(self) -> str:
        return " x ".join(_wrap(f, Direct) for f in self.factors)


ShapeExpr = Union[Cyclic, Layers, Named, Extension, Direct]


def _wrap(e, parent, right: bool = False) -> str:
    if isinstance(e, Direct) or (right and isinstance(e, Extension)):
        return f"({e})"
    return str(e)


# -- catalog -----------------------------------------------------------------

_ALIASES = {
    "PSL": "L",
    "PSU": "U",
    "Alt": "A",
    "Sym": "S",
    "Dih": "D",
    "Ω": "O",
}


class OrderCatalog:
    """Immutable map from canonical group name to exact order."""

    def __init__(self, orders: Mapping[str, int]):
        self._orders = dict(orders)

    @classmethod
    def from_file(cls, path: str | Path) -> OrderCatalog:
        return cls(_read_catalog(Path(path).read_text(encoding="utf-8"), str(path)))

    @classmethod
    def default(cls) -> OrderCatalog:
        return _default_catalog()

    def __contains__(self, name: str) -> bool:
        try:
            self.order(name)
        except UnknownGroupError:
            return False
        return True

    def __iter__(self) -> Iterator[str]:
        return iter(self._orders)

    def __len__(self) -> int:
        return len(self._orders)

    def items(self):
        return self._orders.items()

    def canonical(self, name: str) -> str:
        name = normalize_text(name)
        if name in self._orders:
            return name
        for alias, canon in _ALIASES.items():
            if name.startswith(alias) and canon + name[len(alias):] in self._orders:
                return canon + name[len(alias):]
        return name

    def order(self, name: str) -> int:
        canon = self.canonical(name)
        if canon in self._orders:
            return self._orders[canon]
        for alias, c in _ALIASES.items():
            if canon.startswith(alias):
                canon = c + canon[len(alias):]
                break
        try:
            value = family_order(canon)
        except ValueError:
            value = None
        if value is None:
            raise UnknownGroupError(name, difflib.get_close_matches(canon, list(self._orders), n=3, cutoff=0.5))
        return value

    @property
    def monster_order(self) -> int:
        return self._orders["M"]


def _read_catalog(text: str, source: str) -> dict[str, int]:
    orders: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[1].strip().isdigit():
            raise ValueError(f"{source}:{lineno}: expected 'name<TAB>order', got {line!r}")
        name = parts[0].strip()
        if name in orders:
            raise ValueError(f"{source}:{lineno}: duplicate catalog name {name!r}")
        orders[name] = int(parts[1])
    return orders


@lru_cache(maxsize=1)
def _default_catalog() -> OrderCatalog:
    text = resources.files("groupcert").joinpath("data/catalog.tsv").read_text(encoding="utf-8")
    return OrderCatalog(_read_catalog(text, "catalog.tsv"))


# -- parsing -----------------------------------------------------------------

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉⁰¹²³⁴⁵⁶⁷⁸⁹′⁺⁻", "0123456789" "0123456789" "'+-")


def normalize_text(text: str) -> str:
    text = unicodedata.normalize("NFC", text).translate(_SUBSCRIPTS)
    return text.replace("×", " x ").replace("∶", ":")


_EXT_OPS = {".": ".", ":": ":", "·": "·", "`": "·"}


class _ShapeParser:
    def __init__(self, text: str):
        self.raw = text
        self.text = normalize_text(text)
        self.pos = 0
        self.warnings: list[str] = []

    def error(self, message: str, pos: int | None = None):
        raise ShapeSyntaxError(message, self.raw, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def direct(self) -> ShapeExpr:
        factors = [self.extension()]
        while self.peek() == "x":
            self.pos += 1
            factors.append(self.extension())
        return factors[0] if len(factors) == 1 else Direct(tuple(factors))

    def extension(self) -> ShapeExpr:
        left = self.atom()
        kinds = []
        while self.peek() and self.peek() in _EXT_OPS:
            kind = _EXT_OPS[self.text[self.pos]]
            kinds.append(kind)
            self.pos += 1
            left = Extension(left, self.atom(), kind)
        if len(set(kinds)) > 1:
            self.warnings.append(
                f"mixed extension operators {''.join(kinds)!r}: grouped left-to-right as (A.B).C"
            )
        return left

    def atom(self) -> ShapeExpr:
        ch = self.peek()
        start = self.pos
        if not ch:
            self.error("unexpected end of shape")
        if ch == "(":
            self.pos += 1
            inner = self.direct()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            end = self.pos
            while end < len(self.text) and self.text[end].isdigit():
                end += 1
            if end < len(self.text) and self.text[end].isupper():
                return self.named()
            n = int(self.text[self.pos:end])
            self.pos = end
            if n < 1:
                self.error("cyclic order must be positive", start)
            if self.pos < len(self.text) and self.text[self.pos] == "^":
                self.pos += 1
                return Layers(n, self.exponent_block())
            return Cyclic(n)
        if ch.isalpha() or ch == "Ω":
            return self.named()
        self.error(f"unexpected character {ch!r}")

    def exponent_block(self) -> tuple[int, ...]:
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "{":
            close = self.text.find("}", self.pos)
            if close < 0:
                self.error("unterminated exponent block", start)
            body = self.text[self.pos + 1:close]
            parts = [s.strip() for s in body.split("+")]
            if not parts or not all(s.isdigit() for s in parts):
                self.error(f"malformed exponent block {{{body}}}", start)
            self.pos = close + 1
            exps = tuple(int(s) for s in parts)
        else:
            end = self.pos
            while end < len(self.text) and self.text[end].isdigit():
                end += 1
            if end == self.pos:
                self.error("malformed exponent: expected digits or '{...}'", start)
            exps = (int(self.text[self.pos:end]),)
            self.pos = end
        if any(e < 1 for e in exps):
            self.error("layer exponents must be positive", start)
        return exps

    def named(self) -> ShapeExpr:
        start = self.pos
        t = self.text
        end = self.pos
        while end < len(t) and (t[end].isalnum() or t[end] in "Ω'"):
            end += 1
        while end < len(t) and t[end] in "+-":
            end += 1
        if end < len(t) and t[end] == "(":
            close = t.find(")", end)
            body = t[end + 1:close] if close > 0 else ""
            if close > 0 and body.replace(",", "").isdigit():
                end = close + 1
        while end < len(t) and t[end] == "'":
            end += 1
        name = t[start:end]
        if not name:
            self.error("expected a group name", start)
        self.pos = end
        return Named(name)


def parse_shape(text: str) -> ShapeExpr:
    """Parse a shape string; ambiguities are reported as ShapeAmbiguityWarning."""
    expr, notes = parse_shape_with_warnings(text)
    for note in notes:
        warnings.warn(f"{text!r}: {note}", ShapeAmbiguityWarning, stacklevel=2)
    return expr


def parse_shape_with_warnings(text: str) -> tuple[ShapeExpr, list[str]]:
    p = _ShapeParser(text)
    if not p.text.strip():
        raise ShapeSyntaxError("empty shape", text, 0)
    expr = p.direct()
    if p.peek():
        p.error(f"unexpected character {p.peek()!r}")
    return expr, p.warnings


def shape_order(e: ShapeExpr | str, cat: OrderCatalog | None = None) -> int:
    cat = OrderCatalog.default() if cat is None else cat
    if isinstance(e, str):
        e = parse_shape_with_warnings(e)[0]
    if isinstance(e, Cyclic):
        return e.n
    if isinstance(e, Layers):
        return e.base ** sum(e.exponents)
    if isinstance(e, Named):
        return cat.order(e.name)
    if isinstance(e, Extension):
        return shape_order(e.normal, cat) * shape_order(e.top, cat)
    out = 1
    for f in e.factors:
        out *= shape_order(f, cat)
    return out


def factor_tree(e: ShapeExpr | str, cat: OrderCatalog | None = None, indent: str = "") -> list[str]:
    """Human-readable breakdown of a shape's order, one line per node."""
    cat = OrderCatalog.default() if cat is None else cat
    if isinstance(e, str):
        e = parse_shape_with_warnings(e)[0]
    lines = [f"{indent}{e}  [{shape_order(e, cat)}]"]
    if isinstance(e, Extension):
        lines += factor_tree(e.normal, cat, indent + "  ")
        lines += factor_tree(e.top, cat, indent + "  ")
    elif isinstance(e, Direct):
        for f in e.factors:
            lines += factor_tree(f, cat, indent + "  ")
    return lines


def names_in(e: ShapeExpr) -> list[str]:
    if isinstance(e, Named):
        return [e.name]
    if isinstance(e, Extension):
        return names_in(e.normal) + names_in(e.top)
    if isinstance(e, Direct):
        return [n for f in e.factors for n in names_in(f)]
    return []


def check_names(e: ShapeExpr, cat: OrderCatalog | None = None) -> None:
    """Raise UnknownGroupError for the first name that does not resolve."""
    cat = OrderCatalog.default() if cat is None else cat
    for name in names_in(e):
        cat.order(name)


# The maximal subgroups of the Monster, in ASCII shape notation (46 entries).
MONSTER_MAXIMALS = (
    "2.B",
    "2^{1+24}.Co1",
    "2^2.2E6(2):S3",
    "2^{2+11+22}.(M24 x S3)",
    "2^{3+6+12+18}.(L3(2) x 3.S6)",
    "2^{5+10+20}.(S3 x L5(2))",
    "2^{10+16}.O10+(2)",
    "3.Fi24",
    "3^{1+12}.2.Suz:2",
    "S3 x Th",
    "(3^2:2 x O8+(3)).S4",
    "3^{2+5+10}:(M11 x 2.S4)",
    "3^{3+2+6+6}:(L3(3) x SD16)",
    "3^8.O8-(3).2",
    "59:29",
    "(D10 x HN).2",
    "5^{1+6}:2.J2:4",
    "(5^2:4.2^2 x U3(5)):S3",
    "5^{2+2+4}:(S3 x GL2(5))",
    "5^{3+3}.(2 x L3(5))",
    "5^4:(3 x 2.L2(25)):2",
    "(7:3 x He):2",
    "7^{1+4}:(3 x 2.S7)",
    "(7^2:(3 x 2.A4) x L2(7)):2",
    "7^{2+1+2}:GL2(7)",
    "7^2:SL2(7)",
    "11^2:(5 x 2.A5)",
    "(13:6 x L3(3)).2",
    "13^{1+2}:(3 x 4.S4)",
    "13^2:SL2(13):4",
    "41:40",
    "(A5 x A12):2",
    "(A6 x A6 x A6).(2 x S4)",
    "(A5 x U3(8):3):2",
    "(L3(2) x Sp4(4):2).2",
    "(L2(11) x M12):2",
    "(A7 x (A5 x A5):2^2):2",
    "M11 x A6.2^2",
    "(S5 x S5 x S5):S3",
    "(L2(11) x L2(11)):4",
    "U3(4):4",
    "L2(71)",
    "L2(41)",
    "PGL2(29)",
    "PGL2(19)",
    "PGL2(13)",
)
