"""Brute-force ground truth on small groups.

Everything here works by explicit enumeration.  This module is the trust
anchor for the certificate checks, so it deliberately avoids any cleverness
(no stabiliser chains, no random methods).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import DEFAULT_ORDER_CAP, GroupElement, conjugate

DEFAULT_CAP = 10**6


class CapExceededError(RuntimeError):
    def __init__(self, cap: int, reached: int):
        self.cap = cap
        self.reached = reached
        super().__init__(f"closure exceeds cap {cap} (reached {reached} elements)")


class NotInGroupError(ValueError):
    pass


@dataclass(frozen=True)
class EnumeratedGroup:
    """A fully enumerated finite group; ``elements`` is in BFS discovery order."""

    elements: dict
    generators: tuple
    identity: GroupElement

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements.values())

    def __contains__(self, g: GroupElement) -> bool:
        return g.params == self.identity.params and g.key in self.elements

    def contains_all(self, gens: Iterable[GroupElement]) -> bool:
        return all(g in self for g in gens)


def enumerate_closure(
    gens: Sequence[GroupElement],
    cap: int = DEFAULT_CAP,
    identity: GroupElement | None = None,
) -> EnumeratedGroup:
    """Breadth-first closure of ``gens`` under right multiplication by generators."""
    gens = tuple(gens)
    if identity is None:
        if not gens:
            raise ValueError("need at least one generator or an explicit identity")
        identity = gens[0].identity()
    for g in gens:
        identity._check(g)
    elements = {identity.key: identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x._mul(g)
            if y.key not in elements:
                elements[y.key] = y
                if len(elements) > cap:
                    raise CapExceededError(cap, len(elements))
                queue.append(y)
    return EnumeratedGroup(elements, gens, identity)


def subgroup(G: EnumeratedGroup, gens: Sequence[GroupElement], cap: int = DEFAULT_CAP) -> EnumeratedGroup:
    for g in gens:
        if g not in G:
            raise NotInGroupError(f"{g} is not an element of the enumerated group")
    return enumerate_closure(gens, cap, G.identity)


def _filtered(G: EnumeratedGroup, keep) -> EnumeratedGroup:
    kept = {k: g for k, g in G.elements.items() if keep(g)}
    gens = tuple(kept.values())
    return EnumeratedGroup(kept, gens, G.identity)


def normalizer(G: EnumeratedGroup, E_gens: Sequence[GroupElement], cap: int = DEFAULT_CAP) -> EnumeratedGroup:
    """N_G(<E_gens>) by filtering every element of G."""
    E = subgroup(G, E_gens, cap)
    return _filtered(G, lambda g: all(conjugate(e, g) in E for e in E_gens))


def centralizer(G: EnumeratedGroup, targets: Sequence[GroupElement]) -> EnumeratedGroup:
    for t in targets:
        if t not in G:
            raise NotInGroupError(f"{t} is not an element of the enumerated group")
    return _filtered(G, lambda g: all(g._mul(t) == t._mul(g) for t in targets))


def is_conjugate(G: EnumeratedGroup, x: GroupElement, y: GroupElement) -> GroupElement | None:
    """Some c in G with x^c = y, or None if x and y are not G-conjugate."""
    for t in (x, y):
        if t not in G:
            raise NotInGroupError(f"{t} is not an element of the enumerated group")
    for c in G:
        if conjugate(x, c) == y:
            return c
    return None


def conjugation_orbit(
    seed: GroupElement, actors: Sequence[GroupElement], cap: int = DEFAULT_CAP
) -> dict:
    """Orbit of ``seed`` under conjugation by ``<actors>``; closure under the generators suffices."""
    orbit = {seed.key: seed}
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for a in actors:
            y = conjugate(x, a)
            if y.key not in orbit:
                orbit[y.key] = y
                if len(orbit) > cap:
                    raise CapExceededError(cap, len(orbit))
                queue.append(y)
    return orbit


def conjugacy_classes(G: EnumeratedGroup) -> list[list[GroupElement]]:
    """Exact class partition, classes in order of their first BFS representative."""
    gens = G.generators or tuple(G)
    seen: set = set()
    classes = []
    for g in G:
        if g.key in seen:
            continue
        orbit = conjugation_orbit(g, gens, cap=len(G))
        seen.update(orbit)
        classes.append(list(orbit.values()))
    return classes


def brute_force_order(g: GroupElement, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Order by repeated multiplication; independent of the cycle-type shortcut."""
    x = g
    for m in range(1, cap + 1):
        if x.is_identity():
            return m
        x = x._mul(g)
    raise CapExceededError(cap, cap)


def element_orders(G: EnumeratedGroup) -> set[int]:
    return {g.order() for g in G}
