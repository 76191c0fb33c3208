import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcert.core import (
    CompositionError,
    ElementSyntaxError,
    GroupContext,
    Mat,
    OrderOverflowError,
    Perm,
    commutator,
    conjugate,
    element_order,
    fingerprint,
    inverse,
    mat,
    multiply,
    parse_cycles,
    parse_matrix,
    perm,
)
from groupcert.oracle import brute_force_order, conjugacy_classes, enumerate_closure


def random_perm(rng, n):
    img = list(range(n))
    rng.shuffle(img)
    return Perm(img)


def random_mat(rng, k, p):
    while True:
        rows = [[rng.randrange(p) for _ in range(k)] for _ in range(k)]
        try:
            return Mat(rows, p)
        except ValueError:
            continue


perms7 = st.permutations(list(range(7))).map(Perm)


def test_multiply_applies_left_factor_first():
    assert multiply(perm("(1 2)", 3), perm("(2 3)", 3)) == perm("(1 3 2)", 3)
    a = perm("(1 2)", 3)
    assert a(1) == 2


def test_identity_is_neutral():
    g = perm("(1 4 2)(3 5)", 5)
    e = g.identity()
    assert e * g == g and g * e == g
    assert str(e) == "()"


def test_matrix_inverse_pair_over_gf5():
    a = mat([[0, 4], [1, 0]], 5)
    b = mat([[0, 1], [4, 0]], 5)
    assert (a * b).is_identity()
    assert a.inverse() == b


def test_matrices_act_on_row_vectors():
    a = mat([[1, 1], [0, 1]], 7)
    b = mat([[1, 0], [1, 1]], 7)
    assert (a * b).rows() == [[2, 1], [1, 1]]


def test_composition_mismatch_is_an_error():
    with pytest.raises(CompositionError):
        perm("(1 2)", 3) * perm("(1 2)", 4)
    with pytest.raises(CompositionError):
        mat([[1, 1], [0, 1]], 5) * mat([[1, 1], [0, 1]], 7)
    with pytest.raises(CompositionError):
        perm("(1 2)", 2) * mat([[1, 1], [0, 1]], 5)


def test_inverse_examples():
    assert inverse(perm("(1 2 3)", 3)) == perm("(1 3 2)", 3)
    e = perm("()", 4)
    assert inverse(e) == e


@given(perms7)
def test_inverse_is_an_involution(a):
    assert inverse(inverse(a)) == a
    assert (a * inverse(a)).is_identity()


def test_element_order_examples():
    assert element_order(perm("(1 2 3)(4 5 6 7)", 7)) == 12
    assert element_order(perm("()", 3)) == 1
    assert element_order(mat([[0, 4], [1, 0]], 5)) == 4


def test_matrix_order_cap_is_explicit():
    g = mat([[1, 1], [0, 1]], 65521)
    with pytest.raises(OrderOverflowError):
        element_order(g, cap=100)
    assert element_order(g) == 65521


def test_perm_order_matches_power_iteration_on_s6():
    S6 = enumerate_closure([perm("(1 2)", 6), perm("(1 2 3 4 5 6)", 6)], 1000)
    assert S6.order == 720
    for g in S6:
        assert element_order(g) == brute_force_order(g)


def test_conjugation_convention():
    assert conjugate(perm("(1 2)", 3), perm("(2 3)", 3)) == perm("(1 3)", 3)
    a = perm("(1 2 3)", 4)
    assert conjugate(a, a.identity()) == a
    assert a ** perm("(2 3)", 4) == conjugate(a, perm("(2 3)", 4))


def test_conjugation_preserves_fingerprint_in_s7():
    rng = random.Random(7)
    a = perm("(1 2 3)", 7)
    for _ in range(100):
        g = random_perm(rng, 7)
        assert fingerprint(conjugate(a, g)) == fingerprint(a)
        assert element_order(conjugate(a, g)) == 3


def test_commutator_examples():
    a, b = perm("(1 2)", 4), perm("(3 4)", 4)
    assert commutator(a, b).is_identity()
    a, b = perm("(1 2)", 3), perm("(2 3)", 3)
    # a^-1 b^-1 a b = ((1 2)(2 3))^2 = (1 3 2)^2
    assert commutator(a, b) == perm("(1 2 3)", 3)
    assert commutator(a, a).is_identity()


@given(perms7, perms7)
def test_commutator_trivial_iff_commute(a, b):
    assert commutator(a, b).is_identity() == (a * b == b * a)


def test_fingerprint_examples():
    fp = fingerprint(perm("(1 2)(3 4)", 5))
    assert fp.order == 2 and fp.invariant == ("cycle-type", 1, 2, 2)
    ident = Mat.identity_matrix(3, 5)
    f = fingerprint(ident)
    # (x - 1)^3 = x^3 - 3x^2 + 3x - 1 over GF(5)
    assert f.order == 1 and f.invariant == ("charpoly", 1, 2, 3, 4)
    assert fingerprint(perm("(1 2)", 4)) != fingerprint(perm("(1 2)(3 4)", 4))


def test_charpoly_matches_sympy():
    rng = random.Random(3)
    x = sympy.symbols("x")
    for _ in range(60):
        p = rng.choice([2, 3, 5, 7, 13])
        k = rng.randint(1, 4)
        m = random_mat(rng, k, p)
        expected = sympy.Poly(sympy.Matrix(m.rows()).charpoly(x).as_expr(), x, modulus=p)
        coeffs = [c % p for c in expected.all_coeffs()]
        assert m.charpoly() == tuple(coeffs)


def test_associativity_on_random_triples():
    rng = random.Random(11)
    for _ in range(1000):
        a, b, c = (random_perm(rng, 8) for _ in range(3))
        assert (a * b) * c == a * (b * c)
    for _ in range(1000):
        a, b, c = (random_mat(rng, 3, 5) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@settings(max_examples=200)
@given(perms7, perms7)
def test_order_is_conjugation_invariant(a, b):
    assert element_order(conjugate(a, b)) == element_order(a)


def test_fingerprint_constant_on_oracle_classes():
    A5 = enumerate_closure([perm("(1 2)(3 4)", 5), perm("(1 3 5)", 5)], 100)
    for cls in conjugacy_classes(A5):
        assert len({fingerprint(g) for g in cls}) == 1
    gens = [mat([[1, 1], [0, 1]], 5), mat([[0, 4], [1, 0]], 5)]
    SL = enumerate_closure(gens, 1000)
    assert SL.order == 120
    for cls in conjugacy_classes(SL):
        assert len({fingerprint(g) for g in cls}) == 1


def test_cycle_parser():
    assert parse_cycles("(1 2 3)(4 5)", 5) == Perm([1, 2, 0, 4, 3])
    assert parse_cycles("()", 3).is_identity()
    assert parse_cycles(" (1,2) ", 3) == perm("(1 2)", 3)
    assert str(perm("(3 1 2)", 3)) == "(1 2 3)"


@pytest.mark.parametrize("text", ["(1 2", "(1 x)", "(1 2)(2 3)", "(1 9)", "", "1 2)"])
def test_cycle_parser_rejects_malformed_input(text):
    with pytest.raises(ElementSyntaxError) as exc:
        parse_cycles(text, 4)
    assert "offset" in str(exc.value)


def test_cycle_parser_reports_position():
    with pytest.raises(ElementSyntaxError) as exc:
        parse_cycles("(1 2)(3 x)", 4)
    assert exc.value.pos == 8


def test_matrix_parser():
    m = parse_matrix("[[1, 2], [3, 4]]", 5)
    assert m.rows() == [[1, 2], [3, 4]]
    assert parse_matrix("[[6,0],[0,1]]", 5).rows() == [[1, 0], [0, 1]]
    assert str(m) == "[[1,2],[3,4]]"


@pytest.mark.parametrize("text", ["[[1,2],[3]]", "[[1,2],[2,4]]", "[[1,2],[3,4]", "[[a]]"])
def test_matrix_parser_rejects_malformed_input(text):
    with pytest.raises(ElementSyntaxError):
        parse_matrix(text, 5)


def test_matrix_field_restrictions():
    with pytest.raises(ValueError):
        Mat([[1]], 4)
    with pytest.raises(ValueError):
        Mat([[1]], 65537)


def test_context_round_trip():
    spec = {"backend": "matrix", "dim": 2, "prime": 7, "generators": {"a": "[[1,1],[0,1]]"}}
    ctx = GroupContext.from_spec(spec)
    assert ctx.to_spec() == spec
    with pytest.raises(ValueError):
        GroupContext.from_spec({"backend": "perm", "degree": 3, "colour": "red"})
    with pytest.raises(CompositionError):
        GroupContext("perm", degree=3, generators={"a": perm("(1 2)", 4)})
