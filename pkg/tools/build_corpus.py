"""Regenerate the shipped certificate corpus in src/groupcert/corpus/.

Witness words, expected orbit sizes and exclusion outcomes are computed here
with the brute-force oracle and frozen into the JSON files.  Every certificate
is verified before it is written.
"""

import json
from collections import deque
from pathlib import Path

from groupcert.certificates import PSL2_59_ORDERS, exclusion_search
from groupcert.certfile import certificate_from_dict, subject_order, verify_certificate
from groupcert.core import GroupContext, Perm, conjugate, element_order, mat, perm
from groupcert.oracle import enumerate_closure, is_conjugate
from groupcert.presentations import load_library
from groupcert.search import SearchBudget, random_stream
from groupcert.words import format_word, free_reduce, parse_word

OUT = Path(__file__).resolve().parents[1] / "src/groupcert/corpus"
M11_GENS = {"m1": "(1 2 3 4 5 6 7 8 9 10 11)", "m2": "(3 7 11 8)(4 10 5 6)"}
PSL2_11_ORDERS = [1, 2, 3, 5, 6, 11]


def word_table(gens: dict):
    """Shortest word (BFS) for every element of <gens>, keyed by element key."""
    names = list(gens)
    steps = [(n, gens[n]) for n in names] + [(n + "^-1", gens[n].inverse()) for n in names]
    one = next(iter(gens.values())).identity()
    table = {one.key: "1"}
    queue = deque([(one, [])])
    while queue:
        x, w = queue.popleft()
        for tok, g in steps:
            y = x * g
            if y.key not in table:
                table[y.key] = " ".join(w + [tok])
                queue.append((y, w + [tok]))
    return {k: format_word(free_reduce(parse_word(v))) for k, v in table.items()}


def group_spec(ctx: GroupContext) -> dict:
    return ctx.to_spec()


def perm_group(degree, gens):
    return GroupContext("perm", degree=degree, generators={k: perm(v, degree) for k, v in gens.items()})


def cert(group, checks, compose=(), define=None, **meta):
    doc = {"schema": "groupcert/1", "group": group_spec(group)}
    if define:
        doc["define"] = define
    doc["checks"] = checks
    if compose:
        doc["compose"] = list(compose)
    doc["meta"] = meta
    return doc


def purity_witnesses(E_gens, base, ambient, words):
    E = enumerate_closure(E_gens, 10**6)
    out = {}
    for e in E:
        if e.is_identity():
            continue
        c = is_conjugate(ambient, base, e)
        assert c is not None, e
        out[words[e.key]] = words[c.key]
    return out


def s4_v4():
    G = perm_group(4, {"a": "(1 2)", "b": "(1 2 3 4)"})
    define = {"v1": "a a^(b^2)", "v2": "b^2"}
    env = dict(G.generators)
    env["v1"] = env["a"] * conjugate(env["a"], env["b"] ** 2)
    env["v2"] = env["b"] ** 2
    assert str(env["v1"]) != str(env["v2"])
    S4 = enumerate_closure([env["a"], env["b"]], 100)
    words = word_table(G.generators)
    words[env["v1"].key] = "v1"
    words[env["v2"].key] = "v2"
    wit = purity_witnesses([env["v1"], env["v2"]], env["v1"], S4, words)
    checks = [
        {"type": "check_elementary_abelian", "id": "ea", "gens": ["v1", "v2"], "p": 2, "expected_order": 4},
        {"type": "check_purity", "id": "pure", "gens": ["v1", "v2"], "base": "v1", "witnesses": wit},
        {"type": "check_normalizes", "id": "norm", "actors": ["a", "b"], "E": ["v1", "v2"]},
        {"type": "count_induced_automorphisms", "id": "aut", "actors": ["a", "b"], "E": ["v1", "v2"],
         "expected": 6},
        {"type": "check_orbit_divisibility", "id": "orbit", "actors": ["a", "b"], "seed": "v1", "claimed_orbit": 3},
        {"type": "check_hom_chain", "id": "chain", "levels": [["a", "b"], ["v1", "v2"]],
         "maps": [{"kind": "conjugation", "E": ["v1", "v2"], "claimed_image": 6}], "claimed_terminal": 4},
    ]
    return cert(G, checks, ["chain"], define, shape="2^2:S3", subject=["a", "b"], tight=True,
                paper_tag="normaliser of an elementary abelian 2-group: purity, normalising, automorphism count")


def s4_quotient():
    G = perm_group(4, {"a": "(1 2)", "b": "(1 2 3 4)"})
    env = dict(G.generators)
    v = [env["b"] ** 2, env["a"] * conjugate(env["a"], env["b"] ** 2)]
    v.append(v[0] * v[1])
    # images of a, b in S3: their action on the three double transpositions
    imgs = [str(Perm(tuple(v.index(conjugate(x, g)) for x in v))) for g in (env["a"], env["b"])]
    checks = [
        {"type": "check_hom_chain", "id": "chain", "levels": [["a", "b"], ["b^2", "a a^(b^2)"]],
         "maps": [{"kind": "images", "target": {"backend": "perm", "degree": 3}, "images": imgs,
                   "claimed_image": 6}], "claimed_terminal": 4},
        {"type": "check_centralizes", "id": "cent", "actors": ["b^2"], "targets": ["b", "a a^(b^2)"]},
        {"type": "check_orbit_divisibility", "id": "orbit", "actors": ["a", "b"], "seed": "a", "claimed_orbit": 6},
    ]
    return cert(G, checks, ["chain"], shape="S4", subject=["a", "b"], tight=True,
                paper_tag="kernel/image chain through a map to S3 given by generator images")


def s3_ext():
    G = perm_group(5, {"h": "(1 2 3)", "g": "(1 2)", "u": "(4 5)"})
    checks = [
        {"type": "check_ext_lemma", "id": "ext", "H": ["h"], "g": "g"},
        {"type": "check_centralizes", "id": "cent", "actors": ["u"], "targets": ["h", "g"]},
    ]
    return cert(G, checks, ["ext"], shape="S3", subject=["h", "g"], tight=True,
                paper_tag="coset counting: g outside H doubles the bound")


def a4_ext():
    G = perm_group(4, {"v": "(1 2)(3 4)", "t": "(1 2 3)"})
    checks = [
        {"type": "check_ext_lemma", "id": "ext", "H": ["v"], "g": "t", "prime_power": [3, 1]},
        {"type": "check_normalizes", "id": "norm", "actors": ["t"], "E": ["v", "v^t"]},
        {"type": "check_ext_lemma", "id": "ext2", "H": ["v", "v^t"], "g": "t", "prime_power": [3, 1]},
    ]
    return cert(G, checks, ["ext2"], shape="A4", subject=["v", "t"], tight=True,
                paper_tag="prime-power branch: <g> meets H trivially")


def heisenberg(p):
    def E(i, j):
        m = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
        m[i][j] = 1
        return mat(m, p)

    G = GroupContext("matrix", dim=3, prime=p, generators={"x": E(0, 2), "y": E(0, 1), "l": E(1, 2)})
    checks = [
        {"type": "check_odd_ext", "id": "odd", "p": p, "x": "x", "y": "y", "ell": "l", "sigma": "l",
         "ambient": ["y", "l"]},
        {"type": "check_elementary_abelian", "id": "ea", "gens": ["x", "y"], "p": p, "expected_order": p * p},
        {"type": "check_centralizes", "id": "cent", "actors": ["y", "l"], "targets": ["x"]},
    ]
    if p == 5:
        checks.append({"type": "count_induced_automorphisms", "id": "aut", "actors": ["l"], "E": ["x", "y"],
                       "expected": 5})
    return cert(G, checks, ["odd"], shape=f"{p}^{{1+2}}", subject=["x", "y", "l"], tight=True,
                paper_tag=f"p-group extension lemma with k = 0, p = {p}")


def library_cert(name, compose_simple=True, extra=(), shape=None, tight=True):
    pres = load_library()[name]
    ctx = pres.test_binding
    binding = {g: g for g in pres.generators}
    checks = [{"type": "check_relators", "id": "rels", "presentation": name, "binding": binding}]
    if compose_simple:
        checks.append({"type": "certify_simple_image", "id": "simple", "presentation": name, "binding": binding})
    checks += list(extra)
    compose = ["simple"] if compose_simple else [c["id"] for c in extra if c["type"] == "check_ext_lemma"]
    return cert(ctx, checks, compose, shape=shape or pres.target, subject=list(pres.generators), tight=tight,
                paper_tag=f"presentation check: {pres.source}")


def a5_triangle():
    doc = library_cert("A5-235")
    G = GroupContext.from_spec(doc["group"])
    env = dict(G.generators)
    A5 = enumerate_closure(list(env.values()), 100)
    words = word_table(env)
    v1 = env["a"]
    v2 = next(e for e in A5 if element_order(e) == 2 and e != v1 and (e * v1) == (v1 * e))
    words[v1.key] = "a"
    wv2 = words[v2.key]
    wit = purity_witnesses([v1, v2], v1, A5, words)
    doc["checks"] += [
        {"type": "check_elementary_abelian", "id": "ea", "gens": ["a", wv2], "p": 2, "expected_order": 4},
        {"type": "check_purity", "id": "pure", "gens": ["a", wv2], "base": "a", "witnesses": wit},
    ]
    return doc


def a6_cm():
    return library_cert("A6", extra=[
        {"type": "check_orbit_divisibility", "id": "orbit", "actors": ["s", "t"], "seed": "t", "claimed_orbit": 40},
    ])


def pgl2_7():
    return library_cert("PGL2(7)", compose_simple=False, extra=[
        {"type": "check_ext_lemma", "id": "ext", "H": ["a", "b"], "g": "t"},
    ])


def m11_setup():
    G = perm_group(11, M11_GENS)
    gens = list(G.generators.values())
    M11 = enumerate_closure(gens, 10**4)
    assert M11.order == 7920
    # a (2,3)-pair generating PSL2(11), then an A5 = <g2, g3> inside it
    stream = random_stream(gens, SearchBudget(100000, seed=11))
    pool = [g for g, _ in zip(stream, range(4000))]
    inv = [g for g in pool if element_order(g) == 2]
    three = [g for g in pool if element_order(g) == 3]
    L = None
    for a in inv[:40]:
        for b in three[:40]:
            if element_order(a * b) == 11 and enumerate_closure([a, b], 10**4).order == 660:
                L = (a, b)
                break
        if L:
            break
    L211 = enumerate_closure(list(L), 10**4)
    g2 = next(x for x in L211 if element_order(x) == 2)
    g3 = next(y for y in L211 if element_order(y) == 3 and element_order(g2 * y) == 5
              and enumerate_closure([g2, y], 100).order == 60)
    return G, M11, g2, g3


def m11_exclusion(G, M11, g2, g3, positive):
    words = word_table(G.generators)
    define = {"g2": words[g2.key], "g3": words[g3.key], "b5": "g2 g3", "z": "g2^(g3 g2 g3^2)"}
    probes = ["x g2^(g3 g2)", "x g3", "g2 x g3"]
    if positive:
        order_set = PSL2_11_ORDERS
        expect = "survivors"
    else:
        order_set = [1, 59]
        expect = "excluded"
    env = dict(G.generators, g2=g2, g3=g3)
    cands = [g for g in M11 if element_order(g) == 2]
    res = exclusion_search(cands, probes, set(order_set), env)
    checks = [
        {"type": "check_orbit_divisibility", "id": "d10", "actors": ["b5", "z"], "seed": "b5", "claimed_orbit": 2},
        {"type": "exclusion_search", "id": "search", "candidates": {"elements_of_order": 2, "in": ["m1", "m2"]},
         "probes": probes, "order_set": order_set, "expect": expect, "expected_survivors": len(res.survivors)},
    ]
    if not positive:
        res59 = exclusion_search(cands, probes, PSL2_59_ORDERS, env)
        checks.append({"type": "exclusion_search", "id": "search-O", "candidates": {"elements_of_order": 2,
                       "in": ["m1", "m2"]}, "probes": probes, "order_set": "PSL2(59)",
                       "expect": "excluded" if res59.excluded else "survivors",
                       "expected_survivors": len(res59.survivors)})
    tag = ("positive control: involutions extending an A5 inside PSL2(11)" if positive
           else "negative control: no probe order can lie in {1, 59}")
    return cert(G, checks, (), define, paper_tag=tag)


def main():
    G, M11, g2, g3 = m11_setup()
    docs = {
        "s4_v4_normalizer": s4_v4(),
        "s4_quotient_chain": s4_quotient(),
        "s3_ext_lemma": s3_ext(),
        "a4_ext_prime_power": a4_ext(),
        "heisenberg_3": heisenberg(3),
        "extraspecial_5": heisenberg(5),
        "a5_triangle": a5_triangle(),
        "l2_7_sunday": library_cert("L2(7)"),
        "l2_13_sunday": library_cert("L2(13)"),
        "a6_coxeter_moser": a6_cm(),
        "pgl2_7_extension": pgl2_7(),
        "m11_exclusion_positive": m11_exclusion(G, M11, g2, g3, True),
        "m11_exclusion_negative": m11_exclusion(G, M11, g2, g3, False),
    }
    OUT.mkdir(parents=True, exist_ok=True)
    for name, doc in docs.items():
        c = certificate_from_dict(doc, name)
        rep = verify_certificate(c)
        assert rep.passed, (name, [r.as_dict() for r in rep.failing], rep.definition_errors)
        so = subject_order(c)
        if so is not None:
            assert rep.bound <= so, (name, rep.bound, so)
            if doc["meta"].get("tight"):
                assert rep.bound == so, (name, rep.bound, so)
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"{name}: bound {rep.bound}, subject order {so}")


if __name__ == "__main__":
    main()
