"""Presentation library and Von Dyck verification.

Library file format (``data/presentations.txt``): records start with a
``[name]`` line followed by ``key: value`` lines::

    [A5-235]
    generators: a b
    relator: a^2        # provenance comment
    relator: b^3
    relator: (a b)^5
    target: A5
    simple: yes
    source: <a, b | a^2, b^3, (ab)^5>
    binding: perm degree=5
    bind a: (1 2)(3 4)
    bind b: (1 3 5)

``binding``/``bind`` lines give a test binding whose closure the oracle can
enumerate.  Relators use the word grammar of :mod:`groupcert.words`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from .core import GroupContext, GroupElement, Mat
from .oracle import DEFAULT_CAP, CapExceededError, enumerate_closure
from .shapes import OrderCatalog
from .verdict import CheckError, Verdict
from .words import UnboundGeneratorError, Word, evaluate_word, format_word, generators_of, parse_word


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    target: str
    target_order: int
    simple: bool
    source: str = ""
    provenance: tuple[str, ...] = ()
    test_binding: GroupContext | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"{self.name}: duplicate generator names")
        for r in self.relators:
            if not generators_of(r):
                raise ValueError(f"{self.name}: relator {format_word(r)} mentions no generator")
            extra = generators_of(r) - set(self.generators)
            if extra:
                raise ValueError(f"{self.name}: relator {format_word(r)} uses undeclared {sorted(extra)}")


def make_presentation(
    name: str,
    generators,
    relators,
    target: str,
    simple: bool,
    catalog: OrderCatalog | None = None,
    **kw,
) -> Presentation:
    catalog = OrderCatalog.default() if catalog is None else catalog
    gens = tuple(generators.split()) if isinstance(generators, str) else tuple(generators)
    rels = tuple(parse_word(r) if isinstance(r, str) else r for r in relators)
    return Presentation(name, gens, rels, target, catalog.order(target), simple, **kw)


@dataclass
class RelatorReport:
    presentation: str
    values: list[tuple[str, GroupElement]]
    nontrivial: bool

    @property
    def failing(self) -> list[str]:
        return [r for r, v in self.values if not v.is_identity()]

    @property
    def passed(self) -> bool:
        return not self.failing and self.nontrivial

    def __bool__(self) -> bool:
        return self.passed


def _binding_map(binding) -> Mapping[str, GroupElement]:
    return binding.generators if isinstance(binding, GroupContext) else binding


def check_relators(p: Presentation, binding) -> RelatorReport:
    """Evaluate every relator; pass iff all are trivial and some generator is not."""
    env = _binding_map(binding)
    missing = [g for g in p.generators if g not in env]
    if missing:
        raise UnboundGeneratorError(missing[0])
    values = [(format_word(r), evaluate_word(r, env)) for r in p.relators]
    nontrivial = any(not env[g].is_identity() for g in p.generators)
    return RelatorReport(p.name, values, nontrivial)


def certify_simple_image(
    p: Presentation,
    binding,
    cap: int = DEFAULT_CAP,
    order_witness: int | None = None,
) -> Verdict:
    """Von Dyck: a nontrivial image of a presented simple group is that group.

    The closure is enumerated when it fits under ``cap``; otherwise an explicit
    ``order_witness`` must be supplied and must agree with the target order.
    """
    if not p.simple:
        raise CheckError(f"{p.name} is not flagged simple; Von Dyck argument does not apply")
    report = check_relators(p, binding)
    if report.failing:
        return Verdict("certify_simple_image", False, f"relators fail: {', '.join(report.failing)}")
    if not report.nontrivial:
        return Verdict("certify_simple_image", False, "image is trivial (all generators are the identity)")
    env = _binding_map(binding)
    gens = [env[g] for g in p.generators]
    details = {"target": p.target, "target_order": str(p.target_order), "source": p.source}
    try:
        closure = enumerate_closure(gens, cap)
    except CapExceededError:
        if order_witness is None:
            raise CheckError(f"closure exceeds cap {cap} and no order witness was given") from None
        details["order_witness"] = str(order_witness)
        if order_witness != p.target_order:
            return Verdict("certify_simple_image", False,
                           f"order witness {order_witness} != |{p.target}| = {p.target_order}", details=details)
    else:
        details["closure_order"] = str(closure.order)
        if closure.order != p.target_order:
            return Verdict("certify_simple_image", False,
                           f"closure has order {closure.order}, expected {p.target_order}", details=details)
    return Verdict("certify_simple_image", True, f"isomorphic to {p.target} ({p.name}; {p.source})",
                   bound=p.target_order, details=details)


# -- symmetric-square representation used for PSL2/PGL2 bindings ---------------

def sym2(g, p: int, projective: bool = False) -> Mat:
    """Action of a 2x2 matrix on quadratic forms, a 3x3 matrix over GF(p).

    Kernel is {+-I} on SL2; with ``projective`` the result is scaled by det^-1,
    which kills all scalars and gives a faithful copy of PGL2(p).
    """
    (a, b), (c, d) = [[v % p for v in row] for row in g]
    rows = [
        [a * a, 2 * a * b, b * b],
        [a * c, a * d + b * c, b * d],
        [c * c, 2 * c * d, d * d],
    ]
    if projective:
        inv = pow((a * d - b * c) % p, -1, p)
        rows = [[v * inv for v in r] for r in rows]
    return Mat(rows, p)


# -- library file ------------------------------------------------------------

def _parse_binding(spec: str) -> GroupContext:
    kind, *params = spec.split()
    kv = dict(item.split("=") for item in params)
    if kind == "perm":
        return GroupContext("perm", degree=int(kv["degree"]))
    if kind == "matrix":
        return GroupContext("matrix", dim=int(kv["dim"]), prime=int(kv["prime"]))
    raise ValueError(f"unknown binding backend {kind!r}")


def parse_library(text: str, catalog: OrderCatalog | None = None, source: str = "<text>") -> dict[str, Presentation]:
    catalog = OrderCatalog.default() if catalog is None else catalog
    out: dict[str, Presentation] = {}
    rec: dict | None = None

    def finish():
        if rec is None:
            return
        try:
            ctx = rec.get("ctx")
            if ctx is not None:
                ctx = ctx.with_generators(rec["bind"])
            pres = Presentation(
                rec["name"],
                tuple(rec["generators"].split()),
                tuple(parse_word(r) for r in rec["relators"]),
                rec["target"],
                catalog.order(rec["target"]),
                rec["simple"] == "yes",
                rec.get("source", ""),
                tuple(rec["provenance"]),
                ctx,
            )
        except KeyError as exc:
            raise ValueError(f"{source}: record {rec.get('name')!r} lacks field {exc}") from None
        if pres.name in out:
            raise ValueError(f"{source}: duplicate presentation {pres.name!r}")
        out[pres.name] = pres

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            finish()
            rec = {"name": line[1:-1], "relators": [], "provenance": [], "bind": {}}
            continue
        if rec is None or ":" not in line:
            raise ValueError(f"{source}:{lineno}: unexpected line {raw!r}")
        key, value = (s.strip() for s in line.split(":", 1))
        comment = ""
        if "#" in value:
            value, comment = (s.strip() for s in value.split("#", 1))
        if key == "relator":
            rec["relators"].append(value)
            rec["provenance"].append(comment)
        elif key == "binding":
            rec["ctx"] = _parse_binding(value)
        elif key.startswith("bind "):
            if "ctx" not in rec:
                raise ValueError(f"{source}:{lineno}: 'bind' before 'binding'")
            rec["bind"][key[5:].strip()] = rec["ctx"].parse_element(value)
        elif key in ("generators", "target", "simple", "source"):
            rec[key] = value
        else:
            raise ValueError(f"{source}:{lineno}: unknown field {key!r}")
    finish()
    return out


def load_library(path: str | Path | None = None) -> dict[str, Presentation]:
    if path is not None:
        return parse_library(Path(path).read_text(encoding="utf-8"), source=str(path))
    return _default_library()


@lru_cache(maxsize=1)
def _default_library() -> dict[str, Presentation]:
    text = resources.files("groupcert").joinpath("data/presentations.txt").read_text(encoding="utf-8")
    return parse_library(text, source="presentations.txt")
