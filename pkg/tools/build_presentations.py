"""Regenerate src/groupcert/data/presentations.txt.

Relators for the PGL2(p) entries depend on an outer involution and on words
for its action on the PSL2(p) generators; both are found here by breadth-first
search and then frozen into the data file.  The test-suite re-derives every
group order by coset enumeration, so nothing produced here is trusted blindly.
"""

from collections import deque
from pathlib import Path

from groupcert.core import conjugate, perm
from groupcert.presentations import sym2
from groupcert.words import evaluate_word, format_word, free_reduce, parse_word

OUT = Path(__file__).resolve().parents[1] / "src/groupcert/data/presentations.txt"


def psl_relators(p):
    return [f"a^{p}", "b^2", "(a b)^3", f"(a^4 b a^{(p + 1) // 2} b)^2"]


def is_square(v, p):
    return pow(v % p, (p - 1) // 2, p) == 1


def psl_generators(p):
    """3x3 images of a = [[1,1],[0,1]] and an involution b satisfying the relators."""
    a = sym2([[1, 1], [0, 1]], p)
    rels = [parse_word(r) for r in psl_relators(p)]
    for b2 in ([[0, 1], [p - 1, 0]], [[0, p - 1], [1, 0]]):
        b = sym2(b2, p)
        if all(evaluate_word(r, {"a": a, "b": b}).is_identity() for r in rels):
            return a, b, b2
    raise RuntimeError(f"no standard b works for p={p}")


def words_for(targets, gens, p):
    """Shortest words in a, b (BFS over the group) for each target element."""
    names = ["a", "b", "A"]
    elts = {"a": gens[0], "b": gens[1], "A": gens[0].inverse()}
    one = gens[0].identity()
    seen = {one.key: ""}
    queue = deque([one])
    want = {t.key for t in targets}
    while queue and not want <= seen.keys():
        x = queue.popleft()
        for n in names:
            y = x * elts[n]
            if y.key not in seen:
                seen[y.key] = seen[x.key] + n
                queue.append(y)
    out = []
    for t in targets:
        s = seen[t.key]
        raw = " ".join("a^-1" if ch == "A" else ch for ch in s) or "1"
        out.append(format_word(free_reduce(parse_word(raw))))
    return out


def pgl_record(p):
    a, b, b2 = psl_generators(p)
    if p % 4 == 3:
        t2 = [[p - 1, 0], [0, 1]]
    else:
        n = next(v for v in range(2, p) if not is_square(v, p))
        t2 = [[0, n], [1, 0]]
    t = sym2(t2, p, projective=True)
    a_pg, b_pg = sym2([[1, 1], [0, 1]], p, projective=True), sym2(b2, p, projective=True)
    wa, wb = words_for([conjugate(a_pg, t), conjugate(b_pg, t)], (a_pg, b_pg), p)
    rels = [(r, "PSL2(p) relators on a, b") for r in psl_relators(p)]
    rels += [("t^2", "outer involution"),
             (f"(a^t)^-1 ({wa})", "action of t on a"),
             (f"(b^t)^-1 ({wb})", "action of t on b")]
    binding = {"a": a_pg, "b": b_pg, "t": t}
    for r, _ in rels:
        assert evaluate_word(r, binding).is_identity(), (p, r)
    return {
        "name": f"PGL2({p})",
        "generators": "a b t",
        "relators": rels,
        "target": f"PGL2({p})",
        "simple": "no",
        "source": "PSL2(p):2 semidirect form; outer involution and its action found by search",
        "binding": f"matrix dim=3 prime={p}",
        "bind": binding,
    }


def psl_record(p):
    a, b, _ = psl_generators(p)
    return {
        "name": f"L2({p})",
        "generators": "a b",
        "relators": [(r, "Sunday-type presentation for PSL2(p), p prime") for r in psl_relators(p)],
        "target": f"L2({p})",
        "simple": "yes",
        "source": "a^p = b^2 = (ab)^3 = (a^4 b a^((p+1)/2) b)^2 = 1",
        "binding": f"matrix dim=3 prime={p}",
        "bind": {"a": a, "b": b},
    }


def coxeter_moser(n):
    rels = [(f"s^{n - 2}", "generator orders"), ("t^3", "generator orders")]
    if n % 2:
        rels.append((f"(s t)^{n}", "n odd"))
        rels += [(f"(t s^-{k} t s^{k})^2", f"n odd, k={k}") for k in range(1, (n - 3) // 2 + 1)]
        s = perm("(" + " ".join(map(str, range(3, n + 1))) + ")", n)
    else:
        rels.append((f"(s t)^{n - 1}", "n even"))
        rels += [(f"(t^{(-1) ** k} s^-{k} t s^{k})^2", f"n even, k={k}") for k in range(1, (n - 2) // 2 + 1)]
        s = perm("(1 2)(" + " ".join(map(str, range(3, n + 1))) + ")", n)
    t = perm("(1 2 3)", n)
    return {
        "name": f"A{n}",
        "generators": "s t",
        "relators": rels,
        "target": f"A{n}",
        "simple": "yes" if n >= 5 else "no",
        "source": "Coxeter-Moser two-generator presentation of the alternating group",
        "binding": f"perm degree={n}",
        "bind": {"s": s, "t": t},
    }


def a5_record():
    return {
        "name": "A5-235",
        "generators": "a b",
        "relators": [("a^2", "(2,3,5) triangle group"), ("b^3", "(2,3,5) triangle group"),
                     ("(a b)^5", "(2,3,5) triangle group")],
        "target": "A5",
        "simple": "yes",
        "source": "<a, b | a^2, b^3, (ab)^5>",
        "binding": "perm degree=5",
        "bind": {"a": perm("(1 2)(3 4)", 5), "b": perm("(1 3 5)", 5)},
    }


def render(rec):
    lines = [f"[{rec['name']}]",
             f"generators: {rec['generators']}"]
    for r, why in rec["relators"]:
        lines.append(f"relator: {r}  # {why}")
    lines += [f"target: {rec['target']}",
              f"simple: {rec['simple']}",
              f"source: {rec['source']}",
              f"binding: {rec['binding']}"]
    for name, g in rec["bind"].items():
        lines.append(f"bind {name}: {g}")
    return "\n".join(lines)


def main():
    records = [a5_record()]
    records += [coxeter_moser(n) for n in range(4, 13)]
    records += [psl_record(p) for p in (5, 7, 13)]
    records += [pgl_record(p) for p in (7, 13, 19, 29)]
    header = ("# Presentation library.  One record per [name] block; see "
              "groupcert.presentations for the format.\n"
              "# Generated by tools/build_presentations.py.\n")
    OUT.write_text(header + "\n\n".join(render(r) for r in records) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
