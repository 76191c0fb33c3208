import itertools

import pytest

from groupcert.core import conjugate, element_order, perm
from groupcert.oracle import enumerate_closure, is_conjugate
from groupcert.search import SearchBudget, find_conjugator, find_element_of_order, random_stream

S4_GENS = [perm("(1 2)", 4), perm("(1 2 3 4)", 4)]
S5_GENS = [perm("(1 2)", 5), perm("(1 2 3 4 5)", 5)]
A4_GENS = [perm("(1 2 3)", 4), perm("(1 2)(3 4)", 4)]


def test_draws_stay_in_the_group():
    S4 = enumerate_closure(S4_GENS, 100)
    draws = list(random_stream(S4_GENS, SearchBudget(100, seed=3)))
    assert len(draws) == 100
    assert all(g in S4 for g in draws)
    # the walk does reach a fair part of the group
    assert len(set(draws)) > 12


def test_stream_is_deterministic():
    a = list(random_stream(S5_GENS, SearchBudget(50, seed=7)))
    b = list(random_stream(S5_GENS, SearchBudget(50, seed=7)))
    c = list(random_stream(S5_GENS, SearchBudget(50, seed=8)))
    assert a == b and a != c


def test_single_generator_rejected():
    with pytest.raises(ValueError):
        list(random_stream([perm("(1 2 3)", 3)], SearchBudget()))


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(slots=1)
    with pytest.raises(ValueError):
        SearchBudget(seed=-1)
    with pytest.raises(ValueError):
        SearchBudget(max_draws=-5)


def test_find_element_of_order():
    r = find_element_of_order(S5_GENS, 6, SearchBudget(1000, seed=0))
    assert r.found and element_order(r.element) == 6
    r = find_element_of_order(S5_GENS, 7, SearchBudget(200, seed=0))
    assert r.status == "inconclusive" and r.element is None and r.draws == 200
    r = find_element_of_order(A4_GENS, 3, SearchBudget(100, seed=1))
    assert r.found and element_order(r.element) == 3


def test_conjugator_examples():
    x, y = perm("(1 2)", 4), perm("(3 4)", 4)
    r = find_conjugator(S4_GENS, x, y, SearchBudget(1000))
    assert r.found and conjugate(x, r.element) == y
    t = perm("(1 2 3)", 4)
    r = find_conjugator(A4_GENS, t, t.inverse(), SearchBudget(200))
    assert r.status == "nonexistent"
    r = find_conjugator(A4_GENS, t, t.inverse(), SearchBudget(200), confirm_cap=None)
    assert r.status == "inconclusive"
    assert find_conjugator(A4_GENS, t, t, SearchBudget(0)).element.is_identity()


def test_conjugator_never_contradicts_the_oracle():
    G = enumerate_closure(S4_GENS, 100)
    A4 = enumerate_closure(A4_GENS, 100)
    elems = sorted(A4, key=str)[:8]
    for seed, (x, y) in enumerate(itertools.product(elems, repeat=2)):
        r = find_conjugator(A4_GENS, x, y, SearchBudget(30, seed=seed))
        proof = is_conjugate(A4, x, y)
        if r.found:
            assert conjugate(x, r.element) == y and r.element in A4
        if r.status == "nonexistent":
            assert proof is None
        if proof is None:
            assert not r.found
        assert is_conjugate(G, x, y) is not None or proof is None


def test_result_records():
    r = find_element_of_order(S4_GENS, 4, SearchBudget(100))
    rec = r.as_record()
    assert rec["status"] == "found" and "element" in rec and rec["draws"] == r.draws
