"""Certificate files: JSON schema, loading, and the verification driver.

A certificate is a JSON object::

    {
      "schema": "groupcert/1",
      "group":  {"backend": "perm", "degree": 4,
                 "generators": {"a": "(1 2)", "b": "(1 2 3 4)"}},
      "define": {"v1": "(a b)^2", ...},          # ordered; later names may use earlier ones
      "checks": [{"type": "check_normalizes", "id": "norm",
                  "actors": ["a", "b"], "E": ["v1", "v2"]}, ...],
      "compose": ["ea", "aut"],                 # ids whose bounds multiply
      "meta": {"shape": "2^2:S3", "paper_tag": "...", "subject": ["a", "b"], "tight": true}
    }

Element parameters are words over group generators and defined names.
Unknown fields anywhere are schema errors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .certificates import (
    PSL2_59_ORDERS,
    AllPositive,
    ConjugationLevel,
    HomChain,
    ImageLevel,
    OddExtData,
    check_centralizes,
    check_elementary_abelian,
    check_ext_lemma,
    check_hom_chain,
    check_normalizes,
    check_odd_ext,
    check_orbit_divisibility,
    check_purity,
    count_induced_automorphisms,
    exclusion_search,
)
from .core import GroupContext, GroupError, element_order
from .oracle import DEFAULT_CAP, CapExceededError, enumerate_closure
from .presentations import certify_simple_image, check_relators, load_library
from .shapes import shape_order
from .verdict import CheckError, Verdict
from .words import UnboundGeneratorError, WordSyntaxError, evaluate_word, generators_of, parse_word

SCHEMA_VERSION = "groupcert/1"
TOP_LEVEL = {"schema", "group", "define", "checks", "compose", "meta"}
META_FIELDS = {"shape", "paper_tag", "subject", "tight", "note"}


class SchemaError(ValueError):
    """The document does not match the certificate schema."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


# parameter kinds: "elem" (one word), "elems" (list of words), "int", "ints", plus custom
_COMMON = {"type": "str", "id": "str", "note": "str"}
CHECK_PARAMS: dict[str, dict[str, str]] = {
    "check_elementary_abelian": {"gens": "elems", "p": "int", "expected_order": "int"},
    "check_purity": {"gens": "elems", "base": "elem", "witnesses": "witnesses"},
    "check_normalizes": {"actors": "elems", "E": "elems"},
    "check_centralizes": {"actors": "elems", "targets": "elems"},
    "check_ext_lemma": {"H": "elems", "g": "elem", "prime_power": "ints?"},
    "check_odd_ext": {"p": "int", "x": "elem", "y": "elem", "ell": "elem", "sigma": "elem",
                      "g": "elems?", "h": "elems?", "ambient": "elems?", "subsets": "any?"},
    "count_induced_automorphisms": {"actors": "elems", "E": "elems", "expected": "int?"},
    "check_orbit_divisibility": {"actors": "elems", "seed": "elem", "claimed_orbit": "int"},
    "check_hom_chain": {"levels": "levels", "maps": "maps", "claimed_terminal": "int?"},
    "exclusion_search": {"candidates": "candidates", "probes": "probes", "order_set": "orderset",
                         "free_name": "str?", "expect": "str", "expected_survivors": "int?"},
    "check_relators": {"presentation": "str", "binding": "binding"},
    "certify_simple_image": {"presentation": "str", "binding": "binding", "order_witness": "int?"},
}

NAMED_ORDER_SETS = {"PSL2(59)": PSL2_59_ORDERS}


@dataclass
class Certificate:
    context: GroupContext
    definitions: dict[str, str]
    checks: list[dict[str, Any]]
    compose: list[str] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)
    source: str = "<memory>"


@dataclass
class CheckRecord:
    id: str
    type: str
    status: str  # pass | fail | error | skipped
    message: str = ""
    bound: int | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        rec: dict[str, Any] = {"id": self.id, "type": self.type, "status": self.status}
        if self.bound is not None:
            rec["bound"] = str(self.bound)
        if self.message:
            rec["message"] = self.message
        if self.details:
            rec["details"] = self.details
        return rec


@dataclass
class CertificateReport:
    source: str
    records: list[CheckRecord]
    bound: int
    shape: str | None = None
    shape_order: int | None = None
    warnings: list[str] = field(default_factory=list)
    definition_errors: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.definition_errors and all(r.status == "pass" for r in self.records)

    @property
    def cap_exceeded(self) -> bool:
        return any(r.details.get("error") == "cap-exceeded" for r in self.records if r.status == "error")

    @property
    def failing(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status != "pass"]

    @property
    def comparison(self) -> str | None:
        if self.shape_order is None:
            return None
        if self.bound == self.shape_order:
            return "equal"
        return "below" if self.bound < self.shape_order else "above"

    def summary_record(self) -> dict:
        rec: dict[str, Any] = {
            "certificate": self.source,
            "status": "pass" if self.passed else "fail",
            "bound": str(self.bound),
        }
        if self.shape is not None:
            rec["shape"] = self.shape
            rec["shape_order"] = str(self.shape_order)
            rec["comparison"] = self.comparison
        if self.warnings:
            rec["warnings"] = self.warnings
        if self.definition_errors:
            rec["definition_errors"] = self.definition_errors
        return rec

    def ndjson_lines(self) -> list[str]:
        lines = []
        for r in self.records:
            d = {"certificate": self.source}
            d.update(r.as_dict())
            lines.append(json.dumps(d, sort_keys=False, ensure_ascii=False))
        lines.append(json.dumps(self.summary_record(), ensure_ascii=False))
        return lines


# -- loading -------------------------------------------------------------------

def _expect(cond: bool, message: str, where: str) -> None:
    if not cond:
        raise SchemaError(message, where)


def _is_word_list(v) -> bool:
    return isinstance(v, list) and all(isinstance(s, str) for s in v)


def _validate_param(kind: str, value, where: str) -> None:
    kind = kind.rstrip("?")
    if kind in ("elem", "str"):
        _expect(isinstance(value, str), f"expected a string, got {type(value).__name__}", where)
    elif kind == "elems":
        _expect(_is_word_list(value), "expected a list of words", where)
    elif kind == "int":
        _expect(isinstance(value, int) and not isinstance(value, bool), "expected an integer", where)
    elif kind == "ints":
        _expect(isinstance(value, list) and all(isinstance(v, int) for v in value), "expected integers", where)
    elif kind == "witnesses":
        _expect(isinstance(value, dict) and all(isinstance(v, str) for v in value.values()),
                "expected an object mapping elements (or '#index') to words", where)
    elif kind == "levels":
        _expect(isinstance(value, list) and all(_is_word_list(v) for v in value), "expected a list of word lists", where)
    elif kind == "maps":
        _expect(isinstance(value, list), "expected a list of map specs", where)
        for i, m in enumerate(value):
            w = f"{where}[{i}]"
            _expect(isinstance(m, dict), "expected an object", w)
            kinds = {"conjugation": {"kind", "E", "claimed_image"},
                     "images": {"kind", "target", "images", "claimed_image"}}
            _expect(m.get("kind") in kinds, "kind must be 'conjugation' or 'images'", w)
            unknown = set(m) - kinds[m["kind"]]
            _expect(not unknown, f"unknown field(s) {sorted(unknown)}", w)
    elif kind == "candidates":
        ok = _is_word_list(value) or (
            isinstance(value, dict) and set(value) <= {"elements_of_order", "in"}
            and isinstance(value.get("elements_of_order"), int) and _is_word_list(value.get("in")))
        _expect(ok, "expected a list of words or {'elements_of_order': n, 'in': [...]}", where)
    elif kind == "probes":
        _expect(_is_word_list(value) and value, "expected a nonempty list of probe words", where)
    elif kind == "orderset":
        ok = (isinstance(value, list) and all(isinstance(v, int) for v in value)) or value in NAMED_ORDER_SETS \
            or value == "all"
        _expect(ok, f"expected a list of integers, 'all', or one of {sorted(NAMED_ORDER_SETS)}", where)
    elif kind == "binding":
        _expect(isinstance(value, dict) and all(isinstance(v, str) for v in value.values()),
                "expected an object mapping presentation generators to words", where)
    elif kind == "any":
        pass
    else:  # pragma: no cover
        raise AssertionError(kind)


def certificate_from_dict(doc: dict, source: str = "<memory>") -> Certificate:
    _expect(isinstance(doc, dict), "certificate must be a JSON object", source)
    unknown = set(doc) - TOP_LEVEL
    _expect(not unknown, f"unknown top-level field(s) {sorted(unknown)}", source)
    _expect(doc.get("schema") == SCHEMA_VERSION, f"schema must be {SCHEMA_VERSION!r}", f"{source}: schema")
    _expect(isinstance(doc.get("group"), dict), "missing 'group' object", source)
    try:
        ctx = GroupContext.from_spec(doc["group"])
    except (ValueError, GroupError) as exc:
        raise SchemaError(str(exc), f"{source}: group") from None
    define = doc.get("define", {})
    _expect(isinstance(define, dict) and all(isinstance(v, str) for v in define.values()),
            "'define' must map names to words", f"{source}: define")
    for name in define:
        _expect(name.isidentifier(), f"invalid name {name!r}", f"{source}: define")
        _expect(name not in ctx.generators, f"{name!r} redefines a group generator", f"{source}: define")
    checks = doc.get("checks", [])
    _expect(isinstance(checks, list), "'checks' must be a list", source)
    seen_ids = set()
    for i, chk in enumerate(checks):
        where = f"{source}: checks[{i}]"
        _expect(isinstance(chk, dict), "check must be an object", where)
        typ = chk.get("type")
        _expect(typ in CHECK_PARAMS, f"unknown check type {typ!r}", where)
        spec = CHECK_PARAMS[typ]
        unknown = set(chk) - set(spec) - set(_COMMON)
        _expect(not unknown, f"unknown field(s) {sorted(unknown)} for {typ}", where)
        for param, kind in spec.items():
            if param not in chk:
                _expect(kind.endswith("?"), f"missing parameter {param!r}", where)
                continue
            _validate_param(kind, chk[param], f"{where}.{param}")
        cid = chk.get("id", f"check{i + 1}")
        _expect(cid not in seen_ids, f"duplicate check id {cid!r}", where)
        seen_ids.add(cid)
    compose = doc.get("compose", [])
    _expect(_is_word_list(compose), "'compose' must be a list of check ids", f"{source}: compose")
    for cid in compose:
        _expect(cid in seen_ids, f"unknown check id {cid!r}", f"{source}: compose")
    meta = doc.get("meta", {})
    _expect(isinstance(meta, dict), "'meta' must be an object", f"{source}: meta")
    unknown = set(meta) - META_FIELDS
    _expect(not unknown, f"unknown meta field(s) {sorted(unknown)}", f"{source}: meta")
    return Certificate(ctx, dict(define), list(checks), list(compose), dict(meta), source)


def load_certificate(path: str | Path) -> Certificate:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno}, offset {exc.pos})",
                          str(path)) from None
    return certificate_from_dict(doc, str(path))


# -- verification --------------------------------------------------------------

def _word_refs(chk: dict) -> set[str]:
    """Names referenced by a check's element parameters (excluding probe free names)."""
    spec = CHECK_PARAMS[chk["type"]]
    words: list[str] = []
    for param, kind in spec.items():
        if param not in chk:
            continue
        v = chk[param]
        kind = kind.rstrip("?")
        if kind == "elem":
            words.append(v)
        elif kind == "elems":
            words += v
        elif kind == "witnesses":
            words += list(v.values()) + [k for k in v if not k.startswith("#")]
        elif kind == "levels":
            words += [w for lvl in v for w in lvl]
        elif kind == "maps":
            for m in v:
                if m["kind"] == "conjugation":
                    words += m["E"]
        elif kind == "candidates":
            words += v if isinstance(v, list) else v["in"]
        elif kind == "binding":
            words += list(v.values())
    refs: set[str] = set()
    for w in words:
        refs |= generators_of(parse_word(w))
    if chk["type"] == "exclusion_search":
        free = chk.get("free_name", "x")
        for w in chk["probes"]:
            refs |= generators_of(parse_word(w)) - {free}
    return refs


class _Runner:
    def __init__(self, cert: Certificate, cap: int):
        self.cert = cert
        self.cap = cap
        self.ctx = cert.context
        self.env = dict(cert.context.generators)
        self.one = cert.context.identity()

    def el(self, text: str):
        return evaluate_word(parse_word(text), self.env, self.one)

    def els(self, texts):
        return [self.el(t) for t in texts]

    def run(self, chk: dict) -> Verdict:
        handler: Callable[[dict], Verdict] = getattr(self, "_" + chk["type"])
        return handler(chk)

    def _check_elementary_abelian(self, c):
        return check_elementary_abelian(self.els(c["gens"]), c["p"], c["expected_order"], self.cap)

    def _check_purity(self, c):
        witnesses = {}
        for key, word in c["witnesses"].items():
            k = int(key[1:]) if key.startswith("#") else self.el(key)
            witnesses[k] = self.el(word)
        return check_purity(self.els(c["gens"]), self.el(c["base"]), witnesses, self.cap)

    def _check_normalizes(self, c):
        return check_normalizes(self.els(c["actors"]), self.els(c["E"]), self.cap)

    def _check_centralizes(self, c):
        return check_centralizes(self.els(c["actors"]), self.els(c["targets"]))

    def _check_ext_lemma(self, c):
        pp = c.get("prime_power")
        if pp is not None and len(pp) != 2:
            raise CheckError("prime_power must be [p, n]")
        return check_ext_lemma(self.els(c["H"]), self.el(c["g"]), tuple(pp) if pp else None, self.cap)

    def _check_odd_ext(self, c):
        d = OddExtData(
            p=c["p"], x=self.el(c["x"]), y=self.el(c["y"]), ell=self.el(c["ell"]), sigma=self.el(c["sigma"]),
            gs=self.els(c.get("g", [])), hs=self.els(c.get("h", [])),
            ambient=self.els(c["ambient"]) if "ambient" in c else None,
            subsets=c.get("subsets"),
        )
        return check_odd_ext(d, self.cap)

    def _count_induced_automorphisms(self, c):
        n = count_induced_automorphisms(self.els(c["actors"]), self.els(c["E"]), self.cap)
        expected = c.get("expected")
        if expected is not None and n != expected:
            return Verdict("count_induced_automorphisms", False, f"{n} automorphisms induced, expected {expected}",
                           details={"count": n})
        return Verdict("count_induced_automorphisms", True, f"{n} automorphisms induced", bound=n,
                       details={"count": n})

    def _check_orbit_divisibility(self, c):
        return check_orbit_divisibility(self.els(c["actors"]), self.el(c["seed"]), c["claimed_orbit"], self.cap)

    def _check_hom_chain(self, c):
        maps = []
        for m in c["maps"]:
            if m["kind"] == "conjugation":
                maps.append(ConjugationLevel(self.els(m["E"]), m.get("claimed_image")))
            else:
                target = GroupContext.from_spec(dict(m["target"], generators={}))
                images = [target.parse_element(t) for t in m["images"]]
                maps.append(ImageLevel(images, target.identity(), m.get("claimed_image")))
        chain = HomChain([self.els(lvl) for lvl in c["levels"]], maps, c.get("claimed_terminal"))
        return check_hom_chain(chain, self.cap)

    def _exclusion_search(self, c):
        cand = c["candidates"]
        if isinstance(cand, dict):
            G = enumerate_closure(self.els(cand["in"]), self.cap, self.one)
            n = cand["elements_of_order"]
            candidates = [g for g in G if element_order(g) == n]
        else:
            candidates = self.els(cand)
        os_spec = c["order_set"]
        if os_spec == "all":
            order_set = AllPositive()
        elif isinstance(os_spec, str):
            order_set = NAMED_ORDER_SETS[os_spec]
        else:
            order_set = frozenset(os_spec)
        res = exclusion_search(candidates, c["probes"], order_set, self.env, c.get("free_name", "x"))
        details = {"candidates": res.checked, "survivors": len(res.survivors)}
        expect = c["expect"]
        if expect not in ("excluded", "survivors"):
            raise CheckError("expect must be 'excluded' or 'survivors'")
        ok = res.excluded if expect == "excluded" else not res.excluded
        want = c.get("expected_survivors")
        if want is not None and want != len(res.survivors):
            ok = False
        msg = (f"{len(res.survivors)} of {res.checked} candidates survive"
               + (" (exclusion certified over this candidate list)" if res.excluded else ""))
        return Verdict("exclusion_search", ok, msg, details=details)

    def _presentation(self, c):
        lib = load_library()
        if c["presentation"] not in lib:
            raise CheckError(f"unknown presentation {c['presentation']!r}")
        pres = lib[c["presentation"]]
        binding = {g: self.el(w) for g, w in c["binding"].items()}
        return pres, binding

    def _check_relators(self, c):
        pres, binding = self._presentation(c)
        rep = check_relators(pres, binding)
        if rep.passed:
            return Verdict("check_relators", True, f"all {len(rep.values)} relators of {pres.name} hold")
        why = f"relators fail: {', '.join(rep.failing)}" if rep.failing else "all generators are trivial"
        return Verdict("check_relators", False, why)

    def _certify_simple_image(self, c):
        pres, binding = self._presentation(c)
        return certify_simple_image(pres, binding, self.cap, c.get("order_witness"))


def verify_certificate(cert: Certificate, cap: int = DEFAULT_CAP) -> CertificateReport:
    runner = _Runner(cert, cap)
    failed_defs: dict[str, str] = {}
    for name, text in cert.definitions.items():
        try:
            w = parse_word(text)
            deps = generators_of(w) & set(failed_defs)
            if deps:
                failed_defs[name] = f"depends on failed definition {sorted(deps)[0]!r}"
                continue
            runner.env[name] = evaluate_word(w, runner.env, runner.one)
        except (WordSyntaxError, UnboundGeneratorError, GroupError) as exc:
            failed_defs[name] = str(exc)

    records: list[CheckRecord] = []
    warnings: list[str] = []
    for i, chk in enumerate(cert.checks):
        cid = chk.get("id", f"check{i + 1}")
        typ = chk["type"]
        try:
            refs = _word_refs(chk)
        except WordSyntaxError as exc:
            records.append(CheckRecord(cid, typ, "error", str(exc)))
            continue
        bad = sorted(refs & set(failed_defs))
        if bad:
            records.append(CheckRecord(cid, typ, "skipped", f"depends on failed definition {bad[0]!r}"))
            continue
        try:
            v = runner.run(chk)
        except CapExceededError as exc:
            records.append(CheckRecord(cid, typ, "error", str(exc), details={"error": "cap-exceeded"}))
            continue
        except (CheckError, UnboundGeneratorError, GroupError, WordSyntaxError, ValueError) as exc:
            records.append(CheckRecord(cid, typ, "error", str(exc)))
            continue
        records.append(CheckRecord(cid, typ, "pass" if v.passed else "fail", v.message, v.bound, v.details))

    if not cert.checks:
        warnings.append("empty check list: vacuous pass with bound 1")
    by_id = {r.id: r for r in records}
    bound = 1
    for cid in cert.compose:
        r = by_id[cid]
        if r.status != "pass" or r.bound is None:
            warnings.append(f"composed check {cid!r} did not certify a bound")
            continue
        bound *= r.bound
    shape = cert.meta.get("shape")
    order = None
    if shape is not None:
        try:
            order = shape_order(shape)
        except (ValueError, KeyError) as exc:
            warnings.append(f"shape {shape!r} could not be evaluated: {exc}")
            shape = None
    return CertificateReport(cert.source, records, bound, shape, order, warnings, failed_defs)


def subject_order(cert: Certificate, cap: int = DEFAULT_CAP) -> int | None:
    """Oracle order of the group named by ``meta.subject`` (used for soundness tests)."""
    subject = cert.meta.get("subject")
    if not subject:
        return None
    runner = _Runner(cert, cap)
    for name, text in cert.definitions.items():
        runner.env[name] = runner.el(text)
    return enumerate_closure(runner.els(subject), cap, runner.one).order


def product_of_bounds(records) -> int:
    return math.prod(r.bound for r in records if r.bound is not None)
