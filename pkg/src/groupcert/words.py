"""Abstract group words: parsing, printing, evaluation and free reduction.

Grammar (whitespace and ``*`` both separate factors of a product)::

    word    := factor (('*')? factor)*
    factor  := atom ('^' exponent)*
    exponent:= ['-'] INTEGER          -- power
             | NAME | '(' word ')'    -- conjugation  w^u = u^-1 w u
    atom    := NAME | '1' | '(' word ')' | '[' word ',' word ']'

``[w, u]`` is the commutator ``w^-1 u^-1 w u``.  Exponents are Python ints,
so literal powers such as ``^85`` never overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .core import GroupContext, GroupElement, commutator, conjugate, power


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at offset {pos}: {text!r}")


class UnboundGeneratorError(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"unbound generator {self.name!r}"


@dataclass(frozen=True)
class Identity:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self) -> str:
        return " ".join(_wrap_factor(f) for f in self.factors)


@dataclass(frozen=True)
class Power:
    base: "Word"
    exponent: int

    def __str__(self) -> str:
        return f"{_wrap_base(self.base)}^{self.exponent}"


@dataclass(frozen=True)
class Conj:
    base: "Word"
    by: "Word"

    def __str__(self) -> str:
        by = str(self.by) if isinstance(self.by, Gen) else f"({self.by})"
        return f"{_wrap_base(self.base)}^{by}"


@dataclass(frozen=True)
class Comm:
    left: "Word"
    right: "Word"

    def __str__(self) -> str:
        return f"[{self.left},{self.right}]"


Word = Union[Identity, Gen, Product, Power, Conj, Comm]
IDENTITY = Identity()


def _wrap_base(w: Word) -> str:
    if isinstance(w, (Gen, Comm, Identity)):
        return str(w)
    return f"({w})"


def _wrap_factor(w: Word) -> str:
    return f"({w})" if isinstance(w, Product) else str(w)


def product(factors: Iterable[Word]) -> Word:
    """Flattening product constructor; never builds a 0- or 1-factor Product."""
    flat: list = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        return IDENTITY
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|[()\[\],^*\-]")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {ch!r}", text, pos)
        tokens.append((m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = repr(expected) if expected else "a token"
            found = repr(tok) if tok is not None else "end of input"
            raise WordSyntaxError(f"expected {want}, found {found}", self.text, self.pos())
        self.i += 1
        return tok

    def error(self, message: str):
        raise WordSyntaxError(message, self.text, self.pos())

    def word(self) -> Word:
        factors = [self.factor()]
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                factors.append(self.factor())
            elif tok is not None and (tok in "([" or tok[0].isalnum() or tok[0] == "_"):
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Word:
        w = self.atom()
        while self.peek() == "^":
            self.take()
            tok = self.peek()
            if tok == "-":
                self.take()
                if self.peek() is None or not self.peek().isdigit():
                    self.error("ambiguous exponent: '-' must be followed by an integer")
                w = Power(w, -int(self.take()))
            elif tok is not None and tok.isdigit():
                w = Power(w, int(self.take()))
            elif tok is not None and (tok[0].isalpha() or tok[0] == "_"):
                w = Conj(w, Gen(self.take()))
            elif tok == "(":
                self.take()
                by = self.word()
                self.take(")")
                w = Conj(w, by)
            else:
                self.error("ambiguous exponent: expected an integer, a name or '('")
        return w

    def atom(self) -> Word:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok == "(":
            self.take()
            w = self.word()
            self.take(")")
            return w
        if tok == "[":
            self.take()
            left = self.word()
            self.take(",")
            right = self.word()
            self.take("]")
            return Comm(left, right)
        if tok[0].isalpha() or tok[0] == "_":
            self.take()
            return Gen(tok)
        if tok == "1":
            self.take()
            return IDENTITY
        self.error(f"unexpected token {tok!r}")


def parse_word(text: str) -> Word:
    p = _Parser(text)
    if not p.tokens:
        raise WordSyntaxError("empty word", text, 0)
    w = p.word()
    if p.peek() is not None:
        p.error(f"unexpected token {p.peek()!r}")
    return w


def format_word(w: Word) -> str:
    return str(w)


def generators_of(w: Word) -> set[str]:
    if isinstance(w, Gen):
        return {w.name}
    if isinstance(w, Identity):
        return set()
    if isinstance(w, Product):
        return set().union(*(generators_of(f) for f in w.factors))
    if isinstance(w, Power):
        return generators_of(w.base)
    if isinstance(w, Conj):
        return generators_of(w.base) | generators_of(w.by)
    return generators_of(w.left) | generators_of(w.right)


# -- evaluation --------------------------------------------------------------

Binding = Union[GroupContext, Mapping[str, GroupElement]]


def evaluate_word(w: Word | str, binding: Binding, identity: GroupElement | None = None) -> GroupElement:
    """Evaluate ``w`` homomorphically under a name -> element binding."""
    if isinstance(w, str):
        w = parse_word(w)
    if isinstance(binding, GroupContext):
        identity = binding.identity() if identity is None else identity
        binding = binding.generators
    if identity is None:
        first = next(iter(binding.values()), None)
        if first is None:
            raise ValueError("cannot evaluate without any bound element or identity")
        identity = first.identity()
    return _eval(w, binding, identity)


def _eval(w: Word, env: Mapping[str, GroupElement], one: GroupElement) -> GroupElement:
    if isinstance(w, Gen):
        try:
            g = env[w.name]
        except KeyError:
            raise UnboundGeneratorError(w.name) from None
        one._check(g)
        return g
    if isinstance(w, Identity):
        return one
    if isinstance(w, Product):
        acc = _eval(w.factors[0], env, one)
        for f in w.factors[1:]:
            acc = acc * _eval(f, env, one)
        return acc
    if isinstance(w, Power):
        return power(_eval(w.base, env, one), w.exponent)
    if isinstance(w, Conj):
        return conjugate(_eval(w.base, env, one), _eval(w.by, env, one))
    return commutator(_eval(w.left, env, one), _eval(w.right, env, one))


# -- free reduction ------------------------------------------------------------

def _syllable(w: Word) -> tuple[Word, int]:
    if isinstance(w, Power):
        return w.base, w.exponent
    return w, 1


def _make_power(base: Word, e: int) -> Word:
    if e == 0 or isinstance(base, Identity):
        return IDENTITY
    if e == 1:
        return base
    return Power(base, e)


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse syllables and flatten nested powers.

    The result evaluates to the same element as ``w`` under every binding,
    and ``free_reduce`` is idempotent.
    """
    if isinstance(w, (Gen, Identity)):
        return w
    if isinstance(w, Power):
        base = free_reduce(w.base)
        if isinstance(base, Power):
            return _make_power(base.base, base.exponent * w.exponent)
        return _make_power(base, w.exponent)
    if isinstance(w, Conj):
        base, by = free_reduce(w.base), free_reduce(w.by)
        if isinstance(base, Identity):
            return IDENTITY
        if isinstance(by, Identity):
            return base
        return Conj(base, by)
    if isinstance(w, Comm):
        left, right = free_reduce(w.left), free_reduce(w.right)
        if isinstance(left, Identity) or isinstance(right, Identity):
            return IDENTITY
        return Comm(left, right)

    stack: list[Word] = []

    def push(f: Word) -> None:
        if isinstance(f, Identity):
            return
        if isinstance(f, Product):
            for g in f.factors:
                push(g)
            return
        base, e = _syllable(f)
        if stack:
            top_base, top_e = _syllable(stack[-1])
            if top_base == base:
                stack.pop()
                merged = _make_power(base, top_e + e)
                push(merged)
                return
        stack.append(f)

    for f in w.factors:
        push(free_reduce(f))
    return product(stack)


def substitute(w: Word, mapping: Mapping[str, Word]) -> Word:
    """Replace generator references by words (used for presentation rewriting)."""
    if isinstance(w, Gen):
        return mapping.get(w.name, w)
    if isinstance(w, Identity):
        return w
    if isinstance(w, Product):
        return product(substitute(f, mapping) for f in w.factors)
    if isinstance(w, Power):
        return Power(substitute(w.base, mapping), w.exponent)
    if isinstance(w, Conj):
        return Conj(substitute(w.base, mapping), substitute(w.by, mapping))
    return Comm(substitute(w.left, mapping), substitute(w.right, mapping))
