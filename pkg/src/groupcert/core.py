"""Concrete black-box group backends: permutations and matrices over GF(p).

Composition convention: ``a * b`` means "apply ``a``, then ``b``".  For
permutations this is left-to-right composition of maps; for matrices it is
the ordinary matrix product acting on row vectors (``v * (A * B) = (v * A) * B``).
Conjugation is ``a ** b == b^-1 a b`` and the commutator is ``a^-1 b^-1 a b``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

DEFAULT_ORDER_CAP = 10**6
MAX_PRIME = 2**16


class GroupError(Exception):
    """Base class for errors raised by the group backends."""


class CompositionError(GroupError):
    """Elements from different backends (or parameters) were combined."""


class OrderOverflowError(GroupError):
    pass


class ElementSyntaxError(GroupError, ValueError):
    """Malformed element text; ``pos`` is the byte offset of the problem."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at offset {pos}: {text!r}")


class GroupElement:
    """Common interface of the concrete backends."""

    __slots__ = ()

    backend: str

    @property
    def params(self) -> tuple:
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def is_identity(self) -> bool:
        raise NotImplementedError

    def inverse(self) -> GroupElement:
        raise NotImplementedError

    def _mul(self, other):
        raise NotImplementedError

    def _check(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement) or self.params != other.params:
            raise CompositionError(
                f"cannot compose {describe_params(self)} with {describe_params(other)}"
            )

    def __mul__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self._mul(other)

    def __pow__(self, n) -> GroupElement:
        if isinstance(n, GroupElement):
            return conjugate(self, n)
        return power(self, n)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.params == other.params and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.params, self.key))

    def order(self, cap: int = DEFAULT_ORDER_CAP) -> int:
        return element_order(self, cap)


class Perm(GroupElement):
    """Permutation of ``{1..n}`` stored as a 0-based image tuple."""

    __slots__ = ("images",)
    backend = "perm"

    def __init__(self, images: Iterable[int], _trusted: bool = False):
        images = tuple(images)
        if not _trusted and sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], degree: int) -> Perm:
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for pt in cyc:
                if not 1 <= pt <= degree:
                    raise ValueError(f"point {pt} outside 1..{degree}")
                if pt in seen:
                    raise ValueError(f"point {pt} repeated in cycle notation")
                seen.add(pt)
            for i, pt in enumerate(cyc):
                img[pt - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls(img, _trusted=True)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def params(self) -> tuple:
        return ("perm", len(self.images))

    @property
    def key(self) -> tuple:
        return self.images

    def identity(self) -> Perm:
        return Perm(range(len(self.images)), _trusted=True)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def _mul(self, other: Perm) -> Perm:
        b = other.images
        return Perm([b[i] for i in self.images], _trusted=True)

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v] = i
        return Perm(inv, _trusted=True)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i + 1)
                i = self.images[i]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * len(self.images)
        lengths = []
        for start in range(len(self.images)):
            n = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                n += 1
            if n:
                lengths.append(n)
        return tuple(sorted(lengths))

    def __call__(self, point: int) -> int:
        return self.images[point - 1] + 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Perm({self}, degree={self.degree})"


class Mat(GroupElement):
    """Invertible ``k x k`` matrix over GF(p), entries kept reduced mod p."""

    __slots__ = ("p", "k", "entries")
    backend = "matrix"

    def __init__(self, rows, p: int, _trusted: bool = False):
        if _trusted:
            self.p = p
            self.entries = rows
            self.k = math.isqrt(len(rows))
            return
        if not (2 <= p < MAX_PRIME) or not _is_prime(p):
            raise ValueError(f"field size must be a prime below 2^16, got {p}")
        rows = [list(r) for r in rows]
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise ValueError("matrix must be square and nonempty")
        self.p = p
        self.k = k
        self.entries = tuple(int(v) % p for r in rows for v in r)
        if _det_mod_p(self.entries, k, p) == 0:
            raise ValueError("matrix is singular over GF(%d)" % p)

    @classmethod
    def identity_matrix(cls, k: int, p: int) -> Mat:
        return cls([[int(i == j) for j in range(k)] for i in range(k)], p)

    @property
    def params(self) -> tuple:
        return ("matrix", self.k, self.p)

    @property
    def key(self) -> tuple:
        return self.entries

    def rows(self) -> list[list[int]]:
        k = self.k
        return [list(self.entries[i * k:(i + 1) * k]) for i in range(k)]

    def identity(self) -> Mat:
        k = self.k
        return Mat(tuple(int(i == j) for i in range(k) for j in range(k)), self.p, _trusted=True)

    def is_identity(self) -> bool:
        k = self.k
        return all(v == (i // k == i % k) for i, v in enumerate(self.entries))

    def _mul(self, other: Mat) -> Mat:
        k, p = self.k, self.p
        a, b = self.entries, other.entries
        out = []
        for i in range(k):
            row = a[i * k:(i + 1) * k]
            for j in range(k):
                s = 0
                for t in range(k):
                    s += row[t] * b[t * k + j]
                out.append(s % p)
        return Mat(tuple(out), p, _trusted=True)

    def inverse(self) -> Mat:
        k, p = self.k, self.p
        m = [list(r) + [int(i == j) for j in range(k)] for i, r in enumerate(self.rows())]
        for col in range(k):
            piv = next(r for r in range(col, k) if m[r][col])
            m[col], m[piv] = m[piv], m[col]
            inv = pow(m[col][col], -1, p)
            m[col] = [v * inv % p for v in m[col]]
            for r in range(k):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [(v - f * w) % p for v, w in zip(m[r], m[col])]
        return Mat(tuple(v for r in m for v in r[k:]), p, _trusted=True)

    def charpoly(self) -> tuple[int, ...]:
        """Coefficients of det(tI - A) mod p, highest degree first (monic)."""
        return _charpoly(self.rows(), self.p)

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in self.rows()) + "]"

    def __repr__(self) -> str:
        return f"Mat({self}, p={self.p})"


def describe_params(a) -> str:
    if isinstance(a, Perm):
        return f"permutation of degree {a.degree}"
    if isinstance(a, Mat):
        return f"{a.k}x{a.k} matrix over GF({a.p})"
    return type(a).__name__


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _det_mod_p(entries: tuple, k: int, p: int) -> int:
    m = [list(entries[i * k:(i + 1) * k]) for i in range(k)]
    det = 1
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col] % p
        inv = pow(m[col][col], -1, p)
        for r in range(col + 1, k):
            f = m[r][col] * inv % p
            if f:
                m[r] = [(v - f * w) % p for v, w in zip(m[r], m[col])]
    return det % p


def _charpoly(rows: list[list[int]], p: int) -> tuple[int, ...]:
    # Berkowitz: division-free, so it works verbatim over GF(p).
    n = len(rows)
    vect = [1]
    for r in range(n):
        a = [[rows[i][j] for j in range(r)] for i in range(r)]
        row = rows[r][:r]
        col = [rows[i][r] for i in range(r)]
        c = [1, -rows[r][r] % p]
        power_col = col
        for _ in range(r):
            c.append(-sum(x * y for x, y in zip(row, power_col)) % p)
            power_col = [sum(a[i][j] * power_col[j] for j in range(r)) % p for i in range(r)]
        # Toeplitz product of c (length r+2) with previous vect (length r+1)
        new = [0] * (r + 2)
        for i in range(r + 2):
            s = 0
            for j in range(r + 1):
                if 0 <= i - j < len(c):
                    s += c[i - j] * vect[j]
            new[i] = s % p
        vect = new
    return tuple(vect)


# -- the uniform black-box interface -----------------------------------------

def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def inverse(a: GroupElement) -> GroupElement:
    return a.inverse()


def power(a: GroupElement, n: int) -> GroupElement:
    if n < 0:
        a, n = a.inverse(), -n
    result = a.identity()
    base = a
    while n:
        if n & 1:
            result = result._mul(base)
        n >>= 1
        if n:
            base = base._mul(base)
    return result


def conjugate(a: GroupElement, b: GroupElement) -> GroupElement:
    """Return ``a^b = b^-1 a b``."""
    a._check(b)
    return b.inverse()._mul(a)._mul(b)


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """Return ``[a, b] = a^-1 b^-1 a b``."""
    a._check(b)
    return a.inverse()._mul(b.inverse())._mul(a)._mul(b)


def commutes(a: GroupElement, b: GroupElement) -> bool:
    a._check(b)
    return a._mul(b) == b._mul(a)


def element_order(a: GroupElement, cap: int = DEFAULT_ORDER_CAP) -> int:
    if isinstance(a, Perm):
        return math.lcm(1, *a.cycle_type())
    x = a
    for m in range(1, cap + 1):
        if x.is_identity():
            return m
        x = x._mul(a)
    raise OrderOverflowError(f"order of {a} exceeds cap {cap}")


@dataclass(frozen=True)
class ClassFingerprint:
    order: int
    invariant: tuple

    def __str__(self) -> str:
        return f"order {self.order}, {self.invariant}"


def fingerprint(a: GroupElement) -> ClassFingerprint:
    """Conjugation-invariant (necessary, not sufficient) class label."""
    if isinstance(a, Perm):
        return ClassFingerprint(element_order(a), ("cycle-type",) + a.cycle_type())
    return ClassFingerprint(element_order(a), ("charpoly",) + a.charpoly())


# -- text formats ------------------------------------------------------------

_CYCLE_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|(,))")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity."""
    pos = 0
    cycles: list[list[int]] = []
    current: list[int] | None = None
    stripped_end = len(text.rstrip())
    if not text.strip():
        raise ElementSyntaxError("empty permutation text", text, 0)
    while pos < stripped_end:
        m = _CYCLE_TOKEN.match(text, pos)
        if not m:
            tok_pos = len(text) - len(text[pos:].lstrip())
            raise ElementSyntaxError(f"unexpected character {text[tok_pos]!r}", text, tok_pos)
        tok_pos = m.start(m.lastindex)
        if m.group(1):
            if current is not None:
                raise ElementSyntaxError("nested '('", text, tok_pos)
            current = []
        elif m.group(2):
            if current is None:
                raise ElementSyntaxError("unmatched ')'", text, tok_pos)
            cycles.append(current)
            current = None
        elif m.group(3):
            if current is None:
                raise ElementSyntaxError("point outside a cycle", text, tok_pos)
            pt = int(m.group(3))
            if not 1 <= pt <= degree:
                raise ElementSyntaxError(f"point {pt} outside 1..{degree}", text, tok_pos)
            if pt in current or any(pt in c for c in cycles):
                raise ElementSyntaxError(f"point {pt} repeated", text, tok_pos)
            current.append(pt)
        else:
            if current is None:
                raise ElementSyntaxError("',' outside a cycle", text, tok_pos)
        pos = m.end()
    if current is not None:
        raise ElementSyntaxError("unterminated cycle", text, len(text))
    return Perm.from_cycles(cycles, degree)


def parse_matrix(text: str, p: int, dim: int | None = None) -> Mat:
    """Parse a row-major bracketed list such as ``"[[0,4],[1,0]]"``."""
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            found = repr(text[pos]) if pos < n else "end of input"
            raise ElementSyntaxError(f"expected {ch!r}, found {found}", text, pos)
        pos += 1

    def integer():
        nonlocal pos
        skip()
        start = pos
        if pos < n and text[pos] == "-":
            pos += 1
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos or text[start:pos] == "-":
            raise ElementSyntaxError("expected an integer", text, start)
        return int(text[start:pos])

    rows = []
    expect("[")
    while True:
        expect("[")
        row = [integer()]
        skip()
        while pos < n and text[pos] == ",":
            pos += 1
            row.append(integer())
            skip()
        expect("]")
        rows.append(row)
        skip()
        if pos < n and text[pos] == ",":
            pos += 1
            continue
        break
    expect("]")
    skip()
    if pos != n:
        raise ElementSyntaxError("trailing characters", text, pos)
    k = len(rows)
    for r in rows:
        if len(r) != k:
            raise ElementSyntaxError(f"matrix is not square ({k} rows, row of length {len(r)})", text, 0)
    if dim is not None and k != dim:
        raise ElementSyntaxError(f"expected a {dim}x{dim} matrix, got {k}x{k}", text, 0)
    try:
        return Mat(rows, p)
    except ValueError as exc:
        raise ElementSyntaxError(str(exc), text, 0) from None


@dataclass(frozen=True)
class GroupContext:
    """Backend parameters plus named generator bindings."""

    backend: str
    degree: int | None = None
    dim: int | None = None
    prime: int | None = None
    generators: Mapping[str, GroupElement] = field(default_factory=dict)

    def __post_init__(self):
        if self.backend == "perm":
            if not self.degree or self.degree < 1:
                raise ValueError("permutation context needs a positive degree")
        elif self.backend == "matrix":
            if not self.dim or not self.prime:
                raise ValueError("matrix context needs dim and prime")
            if not (_is_prime(self.prime) and self.prime < MAX_PRIME):
                raise ValueError(f"field size must be a prime below 2^16, got {self.prime}")
        else:
            raise ValueError(f"unknown backend {self.backend!r}")
        for name, g in self.generators.items():
            if g.params != self.params:
                raise CompositionError(
                    f"generator {name!r} is a {describe_params(g)}, context expects {self.params}"
                )
        object.__setattr__(self, "generators", dict(self.generators))

    @property
    def params(self) -> tuple:
        if self.backend == "perm":
            return ("perm", self.degree)
        return ("matrix", self.dim, self.prime)

    def identity(self) -> GroupElement:
        if self.backend == "perm":
            return Perm(range(self.degree), _trusted=True)
        return Mat.identity_matrix(self.dim, self.prime)

    def parse_element(self, text: str) -> GroupElement:
        if self.backend == "perm":
            return parse_cycles(text, self.degree)
        return parse_matrix(text, self.prime, self.dim)

    def format_element(self, g: GroupElement) -> str:
        return str(g)

    def with_generators(self, gens: Mapping[str, GroupElement]) -> GroupContext:
        merged = dict(self.generators)
        merged.update(gens)
        return GroupContext(self.backend, self.degree, self.dim, self.prime, merged)

    @classmethod
    def from_spec(cls, spec: Mapping) -> GroupContext:
        """Build a context from the JSON group block used by certificate files."""
        allowed = {"backend", "degree", "dim", "prime", "generators"}
        unknown = set(spec) - allowed
        if unknown:
            raise ValueError(f"unknown group field(s): {sorted(unknown)}")
        backend = spec.get("backend")
        if backend == "perm":
            ctx = cls("perm", degree=spec.get("degree"))
        elif backend == "matrix":
            ctx = cls("matrix", dim=spec.get("dim"), prime=spec.get("prime"))
        else:
            raise ValueError(f"unknown backend {backend!r}")
        gens = {}
        for name, text in (spec.get("generators") or {}).items():
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"invalid generator name {name!r}")
            gens[name] = ctx.parse_element(text)
        return ctx.with_generators(gens)

    def to_spec(self) -> dict:
        spec: dict = {"backend": self.backend}
        if self.backend == "perm":
            spec["degree"] = self.degree
        else:
            spec["dim"] = self.dim
            spec["prime"] = self.prime
        spec["generators"] = {k: str(v) for k, v in self.generators.items()}
        return spec


def perm(text: str, degree: int) -> Perm:
    """Shorthand used throughout the tests and corpus builders."""
    return parse_cycles(text, degree)


def mat(rows, p: int) -> Mat:
    return Mat(rows, p)
