import random

import pytest

from groupcert.core import mat
from groupcert.families import family_order, order_gl, order_omega_minus, order_omega_plus, order_psl, order_sl
from groupcert.oracle import enumerate_closure
from groupcert.presentations import sym2
from groupcert.shapes import (
    MONSTER_MAXIMALS,
    Cyclic,
    Direct,
    Extension,
    Layers,
    Named,
    OrderCatalog,
    ShapeAmbiguityWarning,
    ShapeSyntaxError,
    UnknownGroupError,
    factor_tree,
    parse_shape,
    parse_shape_with_warnings,
    shape_order,
)

CAT = OrderCatalog.default()


def test_parse_examples():
    assert parse_shape("41:40") == Extension(Cyclic(41), Cyclic(40), ":")
    assert parse_shape("59:29") == Extension(Cyclic(59), Cyclic(29), ":")
    e = parse_shape("3^{3+2+6+6}:(L3(3) x SD16)")
    assert e == Extension(Layers(3, (3, 2, 6, 6)), Direct((Named("L3(3)"), Named("SD16"))), ":")


def test_order_examples():
    assert shape_order("41:40") == 1640
    assert shape_order("3^{3+2+6+6}:(L3(3) x SD16)") == 3**17 * 5616 * 16 == 3**17 * 8 * 11232
    assert shape_order("7^{2+1+2}:GL2(7)") == 7**5 * 2016 == 672 * 7**5 * 3


def test_unicode_and_ascii_agree():
    assert shape_order("3^{2+5+10}:(M₁₁ × 2.S₄)") == shape_order("3^{2+5+10}:(M11 x 2.S4)")
    assert shape_order("3.Fi₂₄′") == shape_order("3.Fi24'")
    assert shape_order("2^2.²E₆(2):S3") == shape_order("2^2.2E6(2):S3")
    assert shape_order("2·A4") == 24


def test_leading_integers_are_cyclic():
    assert parse_shape("2.A4") == Extension(Cyclic(2), Named("A4"), ".")
    assert shape_order("13:6") == 78


def test_extensions_associate_left():
    e = parse_shape("2.A5.2")
    assert e == Extension(Extension(Cyclic(2), Named("A5"), "."), Cyclic(2), ".")


def test_mixed_operators_warn():
    with pytest.warns(ShapeAmbiguityWarning):
        parse_shape("M11.2:3")
    _, notes = parse_shape_with_warnings("2.A5.2")
    assert notes == []


def test_unknown_name_suggests_neighbours():
    with pytest.raises(UnknownGroupError) as exc:
        shape_order("M23 x 2")
    assert "M24" in str(exc.value)


@pytest.mark.parametrize("text", ["3^{2+}:S4", "5^(1+2)", "2^{}", "(A5 x A5", "A5 x", ""])
def test_malformed_shapes(text):
    with pytest.raises(ShapeSyntaxError):
        parse_shape(text)


def test_direct_product_is_multiplicative():
    rng = random.Random(5)
    names = sorted(CAT)
    for _ in range(200):
        a, b = rng.sample(names, 2)
        assert shape_order(f"{a} x {b}") == CAT.order(a) * CAT.order(b)


def test_all_table_shapes_divide_the_monster():
    assert len(MONSTER_MAXIMALS) == 46
    M = CAT.monster_order
    assert M == 808017424794512875886459904961710757005754368000000000
    for s in MONSTER_MAXIMALS:
        n = shape_order(s)
        assert n > 0 and M % n == 0, s


def test_factor_tree_lists_orders():
    lines = factor_tree("41:40")
    assert lines[0] == "41:40  [1640]"
    assert len(lines) == 3


def test_classical_formulas_against_enumeration():
    assert enumerate_closure([mat([[2, 0], [0, 1]], 3), mat([[2, 1], [2, 0]], 3)], 10**4).order == order_gl(2, 3)
    sl25 = enumerate_closure([mat([[1, 1], [0, 1]], 5), mat([[0, 4], [1, 0]], 5)], 10**4)
    assert sl25.order == order_sl(2, 5) == 120
    psl27 = enumerate_closure([sym2([[1, 1], [0, 1]], 7), sym2([[0, 6], [1, 0]], 7)], 10**4)
    assert psl27.order == order_psl(2, 7) == CAT.order("L2(7)")


def test_catalog_matches_family_formulas():
    for name, n in CAT.items():
        f = family_order(name)
        if f is not None:
            assert f == n, name
    assert order_omega_plus(8, 3) == 4952179814400
    assert order_omega_minus(8, 3) == 10151968619520
    assert CAT.order("O10+(2)") == 23499295948800


def test_sporadic_orders():
    assert CAT.order("M11") == 7920
    assert CAT.order("M24") == 244823040
    assert CAT.order("Co1") == 4157776806543360000
    assert CAT.order("Fi24") == 2 * CAT.order("Fi24'")
    assert CAT.order("2E6(2)") == 76532479683774853939200


def test_aliases():
    assert CAT.order("PSL2(59)") == CAT.order("L2(59)") == 59 * 58 * 60 // 2
    assert CAT.order("Alt5") == 60
    assert CAT.order("Dih10") == 10


def test_catalog_file_format(tmp_path):
    p = tmp_path / "cat.tsv"
    p.write_text("# comment\nFoo\t12\n", encoding="utf-8")
    cat = OrderCatalog.from_file(p)
    assert shape_order("Foo x 2", cat) == 24
    p.write_text("Foo 12\n", encoding="utf-8")
    with pytest.raises(ValueError):
        OrderCatalog.from_file(p)

