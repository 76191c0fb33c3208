"""Command-line front end.

Exit codes: 0 every item passed, 1 some check failed, 2 schema or input
error, 3 oracle cap exceeded.  Machine-readable NDJSON goes to stdout (or
``--report PATH``); the human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .certfile import SchemaError, load_certificate, verify_certificate
from .core import GroupContext, GroupError, fingerprint
from .oracle import DEFAULT_CAP, CapExceededError, centralizer, conjugacy_classes, enumerate_closure, normalizer
from .search import SearchBudget, find_conjugator, find_element_of_order
from .shapes import ShapeSyntaxError, UnknownGroupError, factor_tree, shape_order
from .words import WordSyntaxError, UnboundGeneratorError, evaluate_word, parse_word

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_CAP = 0, 1, 2, 3


class _Output:
    def __init__(self, report: str | None):
        self.fh = open(report, "w", encoding="utf-8") if report else sys.stdout

    def emit(self, record) -> None:
        line = record if isinstance(record, str) else json.dumps(record, ensure_ascii=False)
        self.fh.write(line + "\n")

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- verify / corpus --------------------------------------------------------------

def _verify_one(path: str, cap: int) -> dict:
    start = time.perf_counter()
    try:
        cert = load_certificate(path)
    except (SchemaError, OSError) as exc:
        rec = {"certificate": path, "status": "error", "message": str(exc)}
        return {"lines": [json.dumps(rec, ensure_ascii=False)], "code": EXIT_SCHEMA, "summary": f"SCHEMA {path}: {exc}",
                "seconds": time.perf_counter() - start}
    report = verify_certificate(cert, cap)
    if report.passed:
        code = EXIT_OK
    elif report.cap_exceeded:
        code = EXIT_CAP
    else:
        code = EXIT_FAIL
    status = "PASS" if report.passed else "FAIL"
    summary = f"{status} {path}: bound {report.bound}"
    if report.shape:
        summary += f" ({report.comparison} |{report.shape}| = {report.shape_order})"
    for r in report.failing:
        summary += f"\n    {r.status} [{r.id}] {r.type}: {r.message}"
    for name, why in report.definition_errors.items():
        summary += f"\n    definition {name}: {why}"
    for w in report.warnings:
        summary += f"\n    warning: {w}"
    return {"lines": report.ndjson_lines(), "code": code, "summary": summary,
            "seconds": time.perf_counter() - start}


def _expand(paths) -> list[str]:
    out = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            out += sorted(str(q) for q in p.glob("*.json"))
        else:
            out.append(str(p))
    return out


def _combine(codes) -> int:
    codes = set(codes)
    for c in (EXIT_SCHEMA, EXIT_CAP, EXIT_FAIL):
        if c in codes:
            return c
    return EXIT_OK


def _run_verify(files: list[str], args) -> int:
    if not files:
        _say("no certificate files given")
        return EXIT_SCHEMA
    jobs = args.jobs or os.cpu_count() or 1
    start = time.perf_counter()
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(files))) as pool:
            results = list(pool.map(_verify_one, files, [args.cap] * len(files)))
    else:
        results = [_verify_one(f, args.cap) for f in files]
    out = _Output(args.report)
    for res in results:
        for line in res["lines"]:
            out.emit(line)
    out.close()
    for res in results:
        _say(res["summary"] + f"  [{res['seconds']:.2f}s]")
    passed = sum(r["code"] == EXIT_OK for r in results)
    code = _combine(r["code"] for r in results)
    _say(f"{passed}/{len(results)} certificates passed in {time.perf_counter() - start:.2f}s; exit {code}")
    return code


def corpus_dir() -> Path:
    return Path(str(resources.files("groupcert").joinpath("corpus")))


def cmd_verify(args) -> int:
    return _run_verify(_expand(args.paths), args)


def cmd_corpus(args) -> int:
    files = sorted(str(p) for p in corpus_dir().glob("*.json"))
    if args.list:
        for f in files:
            print(f)
        return EXIT_OK
    return _run_verify(files, args)


# -- order -------------------------------------------------------------------------

def cmd_order(args) -> int:
    try:
        n = shape_order(args.shape)
        tree = factor_tree(args.shape) if args.tree else []
    except (ShapeSyntaxError, UnknownGroupError) as exc:
        _say(f"error: {exc}")
        return EXIT_SCHEMA
    print(n)
    for line in tree:
        _say(line)
    return EXIT_OK


# -- oracle / search ---------------------------------------------------------------

def _load_group(path: str) -> GroupContext:
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", path) from None
    if isinstance(spec, dict) and "group" in spec:
        spec = spec["group"]
    try:
        return GroupContext.from_spec(spec)
    except (ValueError, GroupError) as exc:
        raise SchemaError(str(exc), path) from None


def _element(ctx: GroupContext, text: str):
    """Element text (cycles or matrix) or a word over the group's generators."""
    try:
        return ctx.parse_element(text)
    except (GroupError, ValueError):
        return evaluate_word(parse_word(text), ctx.generators, ctx.identity())


def cmd_oracle(args) -> int:
    out = _Output(args.report)
    try:
        ctx = _load_group(args.groupfile)
        elems = [_element(ctx, t) for t in args.elements]
        G = enumerate_closure(list(ctx.generators.values()), args.cap, ctx.identity())
        rec = {"query": args.query, "group_order": G.order}
        if args.query == "order":
            rec["result"] = G.order
        elif args.query == "normalizer":
            rec["result"] = normalizer(G, elems, args.cap).order
        elif args.query == "centralizer":
            rec["result"] = centralizer(G, elems).order
        else:
            classes = conjugacy_classes(G)
            rec["result"] = len(classes)
            rec["classes"] = [{"representative": str(c[0]), "size": len(c), "order": fingerprint(c[0]).order}
                              for c in classes]
    except CapExceededError as exc:
        _say(f"error: {exc}")
        return EXIT_CAP
    except (SchemaError, OSError, WordSyntaxError, UnboundGeneratorError, GroupError, ValueError) as exc:
        _say(f"error: {exc}")
        return EXIT_SCHEMA
    out.emit(rec)
    out.close()
    print(rec["result"], file=sys.stderr)
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        ctx = _load_group(args.groupfile)
        budget = SearchBudget(args.draws, args.seed, args.slots)
        gens = list(ctx.generators.values())
        if args.what == "order":
            if len(args.values) != 1:
                raise ValueError("search order takes one integer")
            res = find_element_of_order(gens, int(args.values[0]), budget)
        else:
            if len(args.values) != 2:
                raise ValueError("search conjugator takes two elements")
            x, y = (_element(ctx, t) for t in args.values)
            res = find_conjugator(gens, x, y, budget, confirm_cap=args.cap)
    except (SchemaError, OSError, WordSyntaxError, UnboundGeneratorError, GroupError, ValueError) as exc:
        _say(f"error: {exc}")
        return EXIT_SCHEMA
    out = _Output(args.report)
    out.emit(dict(res.as_record(), seed=args.seed, slots=args.slots))
    out.close()
    _say(f"{res.status}: {res.element if res.element is not None else res.note}")
    return EXIT_OK if res.found else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure enumeration cap")
    common.add_argument("--seed", type=int, default=0, help="random seed (search)")
    common.add_argument("--jobs", type=int, default=None, help="parallel certificates (default: CPU count)")
    common.add_argument("--report", default=None, help="write NDJSON records here instead of stdout")

    parser = argparse.ArgumentParser(prog="groupcert", description="Desk-scale group certificate checker")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="verify certificate files or directories")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", parents=[common], help="verify the shipped certificate corpus")
    p.add_argument("--list", action="store_true", help="list corpus files and exit")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("order", parents=[common], help="exact order of a shape")
    p.add_argument("shape")
    p.add_argument("--tree", action="store_true", help="print the factor tree to stderr")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("oracle", parents=[common], help="brute-force queries on an enumerable group")
    p.add_argument("groupfile")
    p.add_argument("query", choices=["normalizer", "centralizer", "classes", "order"])
    p.add_argument("elements", nargs="*")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("search", parents=[common], help="seeded random element search")
    p.add_argument("groupfile")
    p.add_argument("what", choices=["order", "conjugator"])
    p.add_argument("values", nargs="+")
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--slots", type=int, default=10)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
