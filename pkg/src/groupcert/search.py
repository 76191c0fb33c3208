"""Seeded random element search by product replacement.

Results distinguish three outcomes: ``found`` (re-verified), ``inconclusive``
(budget exhausted, nothing proven) and ``nonexistent`` (the oracle enumerated
the group and proved absence).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import GroupElement, conjugate, element_order, power
from .oracle import DEFAULT_CAP, CapExceededError, enumerate_closure, is_conjugate

BURN_IN = 60


@dataclass(frozen=True)
class SearchBudget:
    max_draws: int = 1000
    seed: int = 0
    slots: int = 10

    def __post_init__(self):
        if self.max_draws < 0:
            raise ValueError("max_draws must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.slots < 2:
            raise ValueError("need at least 2 slots")


@dataclass
class SearchResult:
    status: str  # found | inconclusive | nonexistent
    element: GroupElement | None
    draws: int
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_record(self) -> dict:
        rec = {"status": self.status, "draws": self.draws}
        if self.element is not None:
            rec["element"] = str(self.element)
        if self.note:
            rec["note"] = self.note
        return rec


def random_stream(gens: Sequence[GroupElement], budget: SearchBudget) -> Iterator[GroupElement]:
    """Product replacement with an accumulator (the "rattle" variant).

    The slot array starts as the generators repeated cyclically; each step
    replaces one slot by its product with (the inverse of) another slot, on a
    random side, and multiplies the accumulator by the new slot value.
    """
    gens = list(gens)
    if len(gens) < 2:
        raise ValueError("product replacement needs at least 2 generators")
    rng = random.Random(budget.seed)
    n = max(budget.slots, len(gens))
    slots = [gens[i % len(gens)] for i in range(n)]
    acc = gens[0].identity()

    def step():
        nonlocal acc
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        other = slots[j] if rng.getrandbits(1) else slots[j].inverse()
        slots[i] = slots[i] * other if rng.getrandbits(1) else other * slots[i]
        acc = acc * slots[i]
        return acc

    for _ in range(BURN_IN):
        step()
    for _ in range(budget.max_draws):
        yield step()


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    return out + ([n] if n > 1 else [])


def _has_order(g: GroupElement, n: int) -> bool:
    # independent re-check: g^n = 1 and g^(n/q) != 1 for each prime q | n
    return power(g, n).is_identity() and all(not power(g, n // q).is_identity() for q in _prime_divisors(n))


def find_element_of_order(gens: Sequence[GroupElement], n: int, budget: SearchBudget) -> SearchResult:
    draws = 0
    for g in random_stream(gens, budget):
        draws += 1
        if element_order(g) == n and _has_order(g, n):
            return SearchResult("found", g, draws)
    return SearchResult("inconclusive", None, draws,
                        f"no element of order {n} in {draws} draws; this is not a proof of nonexistence")


def find_conjugator(
    gens: Sequence[GroupElement],
    x: GroupElement,
    y: GroupElement,
    budget: SearchBudget,
    confirm_cap: int | None = DEFAULT_CAP,
) -> SearchResult:
    """Search for c in <gens> with x^c = y.

    When nothing is found and ``confirm_cap`` is set, the oracle tries to
    enumerate <gens>; if that succeeds the answer becomes either a witness from
    the oracle or a proof of nonexistence.
    """
    if x == y:
        return SearchResult("found", x.identity(), 0, "x = y")
    draws = 0
    for c in random_stream(gens, budget):
        draws += 1
        if conjugate(x, c) == y:
            return SearchResult("found", c, draws)
    if confirm_cap is not None:
        try:
            G = enumerate_closure(list(gens), confirm_cap)
        except CapExceededError:
            pass
        else:
            w = is_conjugate(G, x, y)
            if w is None:
                return SearchResult("nonexistent", None, draws,
                                    f"oracle enumerated all {G.order} elements: x and y are not conjugate")
            return SearchResult("inconclusive", None, draws,
                                "random search failed but the oracle found a conjugator")
    return SearchResult("inconclusive", None, draws, "budget exhausted; this is not a proof of nonexistence")
