"""Machine-checkable proof steps for subgroup-order arguments.

Every check works on concrete elements and uses explicit closure enumeration
(under a cap) for membership; no step is probabilistic.  Checks return a
:class:`~groupcert.verdict.Verdict`.  Conditions that make a check meaningless
(e.g. ``g`` already lies in ``H`` for the coset-counting lemma) raise
:class:`~groupcert.verdict.CheckError` subclasses instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .core import GroupElement, commutator, commutes, conjugate, element_order, fingerprint, power
from .oracle import (
    DEFAULT_CAP,
    CapExceededError,
    EnumeratedGroup,
    centralizer,
    conjugation_orbit,
    enumerate_closure,
)
from .verdict import CheckError, Verdict
from .words import Word, evaluate_word, parse_word

# Element orders of PSL2(59).
PSL2_59_ORDERS = frozenset({1, 2, 3, 5, 6, 10, 15, 29, 30, 59})


class NoBoundError(CheckError):
    pass


class MissingWitnessError(CheckError):
    pass


def _closure(gens: Sequence[GroupElement], cap: int, identity: GroupElement | None = None) -> EnumeratedGroup:
    return enumerate_closure(list(gens), cap, identity)


def _identity_of(*groups: Sequence[GroupElement]) -> GroupElement:
    for g in groups:
        if g:
            return g[0].identity()
    raise CheckError("no elements supplied")


# -- elementary abelian, purity, normalising, centralising ------------------------

def check_elementary_abelian(gens: Sequence[GroupElement], p: int, expected_order: int,
                             cap: int = DEFAULT_CAP) -> Verdict:
    name = "check_elementary_abelian"
    if not gens:
        raise CheckError("need at least one generator")
    for i, g in enumerate(gens):
        if not power(g, p).is_identity():
            return Verdict(name, False, f"generator {i} has order {element_order(g)}, not dividing {p}")
    for i, j in combinations(range(len(gens)), 2):
        if not commutes(gens[i], gens[j]):
            return Verdict(name, False, f"generators {i} and {j} do not commute")
    E = _closure(gens, cap)
    if E.order != expected_order:
        return Verdict(name, False, f"closure has order {E.order}, expected {expected_order}",
                       details={"order": E.order})
    return Verdict(name, True, f"elementary abelian of order {E.order}", bound=E.order,
                   details={"order": E.order})


def check_purity(gens: Sequence[GroupElement], base: GroupElement,
                 witnesses: Mapping, cap: int = DEFAULT_CAP) -> Verdict:
    """Every non-identity element of <gens> is conjugate to ``base`` via a supplied witness.

    ``witnesses`` maps either a 1-based index into the non-identity elements of
    the closure (BFS order) or the element itself to the conjugating element.
    Fingerprints are compared first; a mismatch fails without consulting witnesses.
    """
    name = "check_purity"
    E = _closure(gens, cap)
    nontrivial = [e for e in E if not e.is_identity()]
    fp = fingerprint(base)
    for idx, e in enumerate(nontrivial, 1):
        if fingerprint(e) != fp:
            return Verdict(name, False, f"fingerprint mismatch: element {idx} ({e}) has {fingerprint(e)}, "
                                        f"base has {fp}", details={"stage": "fingerprint"})
    by_key = {}
    for k, c in witnesses.items():
        if isinstance(k, int):
            if not 1 <= k <= len(nontrivial):
                raise CheckError(f"witness index {k} outside 1..{len(nontrivial)}")
            by_key[nontrivial[k - 1].key] = c
        else:
            by_key[k.key] = c
    for idx, e in enumerate(nontrivial, 1):
        c = by_key.get(e.key)
        if c is None:
            raise MissingWitnessError(f"no witness for non-identity element {idx} ({e})")
        if conjugate(base, c) != e:
            return Verdict(name, False, f"witness for element {idx} fails: base^c = {conjugate(base, c)} != {e}",
                           details={"stage": "witness", "element": idx})
    return Verdict(name, True, f"all {len(nontrivial)} non-identity elements conjugate to base",
                   details={"order": E.order})


def check_normalizes(actors: Sequence[GroupElement], E_gens: Sequence[GroupElement],
                     cap: int = DEFAULT_CAP) -> Verdict:
    name = "check_normalizes"
    E = _closure(E_gens, cap)
    for i, a in enumerate(actors):
        for j, e in enumerate(E_gens):
            if conjugate(e, a) not in E:
                return Verdict(name, False, f"actor {i} maps E-generator {j} outside E",
                               details={"actor": i, "generator": j})
    return Verdict(name, True, f"{len(actors)} actor(s) normalise a subgroup of order {E.order}")


def check_centralizes(actors: Sequence[GroupElement], targets: Sequence[GroupElement]) -> Verdict:
    name = "check_centralizes"
    for i, a in enumerate(actors):
        for j, t in enumerate(targets):
            if not commutes(a, t):
                return Verdict(name, False, f"actor {i} does not commute with target {j}",
                               details={"actor": i, "target": j})
    return Verdict(name, True, f"{len(actors)} actor(s) centralise {len(targets)} target(s)")


# -- coset-counting lemma ------------------------------------------------------

def _prime_power(n: int) -> tuple[int, int] | None:
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def check_ext_lemma(H_gens: Sequence[GroupElement], g: GroupElement,
                    prime_power: tuple[int, int] | None = None, cap: int = DEFAULT_CAP) -> Verdict:
    """Lower bound for |<H, g>| from cosets of H.

    g outside H gives factor 2.  If g has order p^n and g^(p^(n-1)) is outside
    H then <g> meets H trivially and the cosets g^i H (0 <= i < p^n) are
    distinct, giving factor p^n.
    """
    name = "check_ext_lemma"
    H = _closure(H_gens, cap, g.identity())
    if g in H:
        raise NoBoundError("no bound: g lies in H")
    factor = 2
    details = {"H_order": H.order}
    if prime_power is not None:
        p, n = prime_power
        actual = element_order(g)
        if actual != p**n:
            raise CheckError(f"order mismatch: g has order {actual}, claimed {p}^{n}")
        if power(g, p ** (n - 1)) not in H:
            factor = p**n
            details["branch"] = "prime-power"
        else:
            details["branch"] = "coset"
            details["note"] = f"g^({p}^{n - 1}) lies in H; only factor 2 certified"
    else:
        details["branch"] = "coset"
    details["factor"] = factor
    return Verdict(name, True, f"|<H, g>| >= {H.order} * {factor}", bound=H.order * factor, details=details)


# -- p-group extension lemma ----------------------------------------------------

@dataclass
class OddExtData:
    """Hypothesis bundle for the commuting-modulo-<x> p-group lemma.

    ``gs``/``hs`` are the paired elements g_1..g_k and h_1..h_k.  ``ambient``
    generates an enumerable group G used to confirm the normality conclusion.
    ``subsets``: index lists into :meth:`designated` whose bounds are reported;
    ``None`` means every subset.
    """

    p: int
    x: GroupElement
    y: GroupElement
    ell: GroupElement
    sigma: GroupElement
    gs: list = field(default_factory=list)
    hs: list = field(default_factory=list)
    ambient: list | None = None
    subsets: list | None = None

    @property
    def k(self) -> int:
        return len(self.gs)

    def designated(self) -> list[tuple[str, GroupElement]]:
        """x, y, g_i, h_i, h_i^sigma: the list whose subsets get the p^|S| bound."""
        out = [("x", self.x), ("y", self.y)]
        out += [(f"g{i + 1}", g) for i, g in enumerate(self.gs)]
        out += [(f"h{i + 1}", h) for i, h in enumerate(self.hs)]
        out += [(f"h{i + 1}^sigma", conjugate(h, self.sigma)) for i, h in enumerate(self.hs)]
        return out


def _commute_mod(a: GroupElement, b: GroupElement, X: EnumeratedGroup) -> bool:
    return commutator(a, b) in X


def odd_ext_hypotheses(d: OddExtData, cap: int = DEFAULT_CAP) -> list[str]:
    """Every violated hypothesis, named; empty when all hold."""
    p, x, y = d.p, d.x, d.y
    if len(d.gs) != len(d.hs):
        return [f"need equally many g and h elements (got {len(d.gs)} and {len(d.hs)})"]
    bad = []
    named = [("x", x), ("y", y), ("ell", d.ell)]
    named += [(f"g{i + 1}", g) for i, g in enumerate(d.gs)] + [(f"h{i + 1}", h) for i, h in enumerate(d.hs)]
    for label, e in named:
        if element_order(e) != p:
            bad.append(f"{label} has order {element_order(e)}, not {p}")
    for label, e in named[1:]:
        if not commutes(e, x):
            bad.append(f"{label} does not centralise x")
    X = _closure([x], cap)
    if y in X:
        bad.append("y lies in <x>")
    for i, (g, h) in enumerate(zip(d.gs, d.hs), 1):
        if not commutes(g, y):
            bad.append(f"g{i} does not commute with y")
        if not commutes(h, y):
            bad.append(f"h{i} does not commute with y")
    if commutes(d.ell, y):
        bad.append("ell commutes with y")
    XY = _closure([x, y], cap)
    for label, e in (("x", x), ("y", y)):
        if conjugate(e, d.sigma) not in XY:
            bad.append(f"sigma does not normalise <x, y> ({label}^sigma outside)")
    gs_sigma = [conjugate(g, d.sigma) for g in d.gs]
    hs_sigma = [conjugate(h, d.sigma) for h in d.hs]
    k = d.k
    for j in range(k):
        for i in range(k):
            for label, other in ((f"g{i + 1}", d.gs[i]), (f"g{i + 1}^sigma", gs_sigma[i]), (f"h{i + 1}", d.hs[i])):
                if not _commute_mod(d.gs[j], other, X):
                    bad.append(f"g{j + 1} and {label} do not commute modulo <x> (i={i + 1}, j={j + 1})")
            hs = hs_sigma[i]
            if i < j and not _commute_mod(d.gs[j], hs, X):
                bad.append(f"g{j + 1} and h{i + 1}^sigma do not commute modulo <x> (i={i + 1} < j={j + 1})")
            if i == j and _commute_mod(d.gs[j], hs, X):
                bad.append(f"g{j + 1} and h{i + 1}^sigma commute modulo <x> (i = j = {i + 1})")
    return bad


def check_odd_ext(d: OddExtData, cap: int = DEFAULT_CAP) -> Verdict:
    """Verify the hypotheses literally, then emit the three conclusions.

    (a) p^|S| lower bounds for subsets S of :meth:`OddExtData.designated`;
    (b) |<x, y, g*, h*, ell>| >= p^(2k+3);
    (c) <A, A^sigma> normal in C_G(<x, y>), confirmed by enumeration when an
        ambient group is supplied (``unchecked`` otherwise).
    """
    name = "check_odd_ext"
    bad = odd_ext_hypotheses(d, cap)
    if bad:
        return Verdict(name, False, "; ".join(bad), details={"violations": bad})
    p, k = d.p, d.k
    designated = d.designated()
    if d.subsets is None:
        subsets = [list(c) for r in range(len(designated) + 1) for c in combinations(range(len(designated)), r)]
    else:
        subsets = [list(s) for s in d.subsets]
    bounds = [{"subset": [designated[i][0] for i in s], "bound": str(p ** len(s))} for s in subsets]
    details = {"k": k, "subset_bounds": bounds, "generation_bound": str(p ** (2 * k + 3))}

    A = [d.x, d.y] + list(d.gs) + list(d.hs)
    if d.ambient:
        G = _closure(d.ambient, cap)
        missing = [i for i, e in enumerate(A + [d.ell, d.sigma]) if e not in G]
        if missing:
            details["normality"] = "refuted: some elements lie outside the ambient group"
        else:
            C = centralizer(G, [d.x, d.y])
            AA = _closure(A + [conjugate(a, d.sigma) for a in A], cap)
            inside = all(e in C for e in AA.generators)
            normal = inside and all(conjugate(a, c) in AA for a in AA.generators for c in C.generators)
            details["normality"] = "confirmed" if normal else "refuted"
            details["centralizer_order"] = C.order
            details["AAsigma_order"] = AA.order
            if not normal:
                return Verdict(name, False, "<A, A^sigma> is not normal in C_G(<x, y>)", details=details)
    else:
        details["normality"] = "unchecked"
    return Verdict(name, True, f"hypotheses hold; |<x, y, g, h, ell>| >= {p}^{2 * k + 3}",
                   bound=p ** (2 * k + 3), details=details)


# -- automorphism counting and orbits ---------------------------------------------

def induced_permutations(actors: Sequence[GroupElement], E: EnumeratedGroup) -> list[tuple[int, ...]]:
    keys = list(E.elements)
    index = {key: i for i, key in enumerate(keys)}
    perms = []
    for a in actors:
        img = []
        for key in keys:
            c = conjugate(E.elements[key], a)
            if c.key not in index:
                raise CheckError(f"actor {a} does not normalise E")
            img.append(index[c.key])
        perms.append(tuple(img))
    return perms


def count_induced_automorphisms(actors: Sequence[GroupElement], E_gens: Sequence[GroupElement],
                                cap: int = DEFAULT_CAP) -> int:
    """Size of the group of automorphisms of <E_gens> induced by conjugation by <actors>."""
    E = _closure(E_gens, cap)
    perms = induced_permutations(actors, E)
    n = E.order
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for a in perms:
                y = tuple(a[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceededError(cap, len(seen))
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def check_orbit_divisibility(actors: Sequence[GroupElement], seed: GroupElement, claimed_orbit: int,
                             cap: int = DEFAULT_CAP) -> Verdict:
    """Conjugation orbit of ``seed`` under <actors> has the claimed size.

    On success the recorded conclusion is that ``claimed_orbit`` divides
    |<actors>| (orbit-stabiliser); ``bound`` is the orbit size.
    """
    name = "check_orbit_divisibility"
    orbit = conjugation_orbit(seed, actors, cap)
    size = len(orbit)
    if size != claimed_orbit:
        return Verdict(name, False, f"orbit has size {size}, claimed {claimed_orbit}", details={"orbit": size})
    return Verdict(name, True, f"orbit size {size}; hence {size} divides |<actors>|", bound=size,
                   details={"orbit": size})


# -- homomorphism chains ---------------------------------------------------------

@dataclass
class ConjugationLevel:
    """phi_i = conjugation action on <E_gens>."""

    E_gens: list
    claimed_image: int | None = None


@dataclass
class ImageLevel:
    """phi_i given by images of F_i in another backend; F_{j>i} map to the identity."""

    images: list
    target_identity: GroupElement
    claimed_image: int | None = None


@dataclass
class HomChain:
    """Filtration K_i = <F_i, ..., F_m> with maps phi_i on K_i for i < m.

    ``levels`` has length m; ``maps`` has length m - 1.  The certified bound
    is |<F_m>| * prod |phi_i(K_i)|, valid because F_{i+1..m} lie in ker phi_i.
    """

    levels: list
    maps: list
    claimed_terminal: int | None = None


def _graph_image(F: Sequence[GroupElement], images: Sequence[GroupElement], rest: Sequence[GroupElement],
                 target_one: GroupElement, cap: int) -> tuple[bool, int]:
    """Enumerate the graph of a putative homomorphism; return (well-defined, |image|)."""
    pairs = [(g, h) for g, h in zip(F, images)] + [(g, target_one) for g in rest]
    one = (pairs[0][0].identity(), target_one)
    seen = {(one[0].key, one[1].key): one}
    first: dict = {one[0].key: one[1].key}
    frontier = [one]
    well_defined = True
    while frontier:
        nxt = []
        for a, b in frontier:
            for g, h in pairs:
                c, d = a._mul(g), b._mul(h)
                key = (c.key, d.key)
                if key in seen:
                    continue
                seen[key] = (c, d)
                if len(seen) > cap:
                    raise CapExceededError(cap, len(seen))
                prev = first.setdefault(c.key, d.key)
                if prev != d.key:
                    well_defined = False
                nxt.append((c, d))
        frontier = nxt
    image = {k[1] for k in seen}
    return well_defined, len(image)


def check_hom_chain(c: HomChain, cap: int = DEFAULT_CAP) -> Verdict:
    name = "check_hom_chain"
    m = len(c.levels)
    if m < 1 or len(c.maps) != m - 1:
        raise CheckError(f"chain with {m} level(s) needs {max(m - 1, 0)} map(s), got {len(c.maps)}")
    sizes = []
    for i, phi in enumerate(c.maps):
        F = list(c.levels[i])
        rest = [g for lvl in c.levels[i + 1:] for g in lvl]
        level = i + 1
        if isinstance(phi, ConjugationLevel):
            E = _closure(phi.E_gens, cap)
            for j, a in enumerate(F + rest):
                for e in phi.E_gens:
                    if conjugate(e, a) not in E:
                        return Verdict(name, False, f"level {level}: generator {j} does not normalise E",
                                       details={"level": level})
            for j, a in enumerate(rest):
                if any(conjugate(e, a) != e for e in phi.E_gens):
                    return Verdict(name, False,
                                   f"level {level}: kernel containment violated (later generator {j} acts nontrivially)",
                                   details={"level": level})
            size = count_induced_automorphisms(F, phi.E_gens, cap) if F else 1
        else:
            if len(phi.images) != len(F):
                raise CheckError(f"level {level}: {len(F)} generators but {len(phi.images)} images")
            well_defined, size = _graph_image(F, phi.images, rest, phi.target_identity, cap)
            if not well_defined:
                return Verdict(name, False,
                               f"level {level}: kernel containment violated or map is not a homomorphism",
                               details={"level": level})
        if phi.claimed_image is not None and phi.claimed_image != size:
            return Verdict(name, False, f"level {level}: image has order {size}, claimed {phi.claimed_image}",
                           details={"level": level})
        sizes.append(size)
    terminal = _closure(c.levels[-1], cap).order if c.levels[-1] else 1
    if c.claimed_terminal is not None and c.claimed_terminal != terminal:
        return Verdict(name, False, f"terminal subgroup has order {terminal}, claimed {c.claimed_terminal}")
    bound = terminal * math.prod(sizes)
    return Verdict(name, True, f"|K_1| >= {terminal} * {' * '.join(map(str, sizes)) or '1'}", bound=bound,
                   details={"image_orders": sizes, "terminal_order": terminal})


# -- order-set exclusion search -------------------------------------------------

@dataclass
class ExclusionResult:
    survivors: list
    checked: int
    probe_orders: list

    @property
    def excluded(self) -> bool:
        return not self.survivors


def exclusion_search(candidates: Sequence[GroupElement], probes: Sequence[Word | str],
                     order_set, env: Mapping[str, GroupElement] | None = None,
                     free_name: str = "x") -> ExclusionResult:
    """Keep candidates x for which every probe word (with ``free_name`` = x) has order in ``order_set``.

    An empty result certifies exclusion over the supplied candidate list only.
    ``order_set`` may be any container supporting ``in``.
    """
    env = dict(env or {})
    words = [parse_word(p) if isinstance(p, str) else p for p in probes]
    survivors, all_orders = [], []
    for x in candidates:
        env[free_name] = x
        orders = []
        keep = True
        for w in words:
            o = element_order(evaluate_word(w, env, x.identity()))
            orders.append(o)
            if o not in order_set:
                keep = False
                break
        all_orders.append(orders)
        if keep:
            survivors.append(x)
    return ExclusionResult(survivors, len(candidates), all_orders)


class AllPositive:
    """Order set containing every positive integer."""

    def __contains__(self, n) -> bool:
        return isinstance(n, int) and n >= 1
