import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.errors import GroupTooLarge, NonUnitInverse, ParseError
from services.group import (
    apply_ring_automorphism,
    check_additivity,
    check_commutant,
    check_commutator_formula,
    check_torus_relation,
    chevalley_group,
    center_order,
    elementary_order,
    enumerate_group,
    reduce_mod_radical,
    simply_connected_order,
    sl2_identity_check,
)
from services.rings import make_ring
from services.roots import build_root_system


def test_one_parameter_subgroups(a2_z4):
    ring = a2_z4.ring
    for alpha in a2_z4.system.roots:
        assert a2_z4.x(alpha, 0).is_identity()
        for t in ring.elements():
            assert a2_z4.x(alpha, t).inverse() == a2_z4.x(alpha, -t)


def test_a2_f2_commutator(a2_f2):
    a1, a2_ = a2_f2.system.simple_roots
    c = a2_f2.x(a1, 1).commutator(a2_f2.x(a2_, 1))
    assert c == a2_f2.x(a1 + a2_, 1)


@pytest.mark.parametrize("system,ring", [("A2", "gf:2"), ("A2", "gf:3"), ("A2", "zmod:4"),
                                         ("A2", "dual:2"), ("B2", "gf:3")])
def test_steinberg_relations(system, ring):
    group = chevalley_group(build_root_system(system), make_ring(ring))
    elements = group.ring.elements()
    pairs = [(s, t) for s in elements for t in elements]
    assert check_additivity(group, pairs) is None
    assert check_torus_relation(group, group.ring.units(), elements) is None
    assert check_commutator_formula(group, pairs) is None


@pytest.mark.slow
def test_steinberg_relations_g2_f5():
    group = chevalley_group(build_root_system("G2"), make_ring("gf:5"))
    elements = group.ring.elements()
    pairs = [(s, t) for s in elements for t in elements]
    assert check_additivity(group, pairs) is None
    assert check_torus_relation(group, group.ring.units(), elements) is None
    assert check_commutator_formula(group, pairs) is None


def test_torus_diagonal(a2_f3):
    a1 = a2_f3.system.simple_roots[0]
    h = a2_f3.h(a1, 2)
    index = a2_f3.system.index(a1)
    assert a2_f3.entry(h, index, index) == a2_f3.ring.one
    assert a2_f3.h(a1, 1).is_identity()


def test_h_rejects_non_units(a2_z4):
    with pytest.raises(NonUnitInverse):
        a2_z4.h(a2_z4.system.simple_roots[0], 2)


def test_reduce_mod_radical(a2_z4):
    alpha = a2_z4.system.simple_roots[0]
    assert reduce_mod_radical(a2_z4.x(alpha, 2)).is_identity()
    assert reduce_mod_radical(a2_z4.h(alpha, 3)).is_identity()
    assert reduce_mod_radical(a2_z4.x(alpha, 3)) == a2_z4.residue_group.x(alpha, 1)


def test_frobenius_is_a_homomorphism():
    group = chevalley_group(build_root_system("A2"), make_ring("gf:4"))
    ring = group.ring
    rng = np.random.default_rng(1)
    x = ring.parse("x")
    alpha = group.system.simple_roots[0]
    assert apply_ring_automorphism(group.x(alpha, x), ring.frobenius) == group.x(alpha, ring.frobenius(x))
    for _ in range(50):
        g, h = group.random_element(rng), group.random_element(rng)
        image = apply_ring_automorphism(g * h, ring.frobenius)
        assert image == apply_ring_automorphism(g, ring.frobenius) * apply_ring_automorphism(h, ring.frobenius)


def test_sl2_identity(a2_z4):
    ring = a2_z4.ring
    for gamma in a2_z4.system.roots:
        assert sl2_identity_check(a2_z4, gamma, 0)
        assert sl2_identity_check(a2_z4, gamma, 2)
        for s in ring.elements():
            if (ring.one - s).is_unit():
                assert sl2_identity_check(a2_z4, gamma, s)
    with pytest.raises(NonUnitInverse):
        sl2_identity_check(a2_z4, a2_z4.system.roots[0], 1)


@pytest.mark.parametrize("system,ring", [("B2", "gf:3"), ("A2", "dual:2")])
def test_sl2_identity_other_instances(system, ring):
    group = chevalley_group(build_root_system(system), make_ring(ring))
    for gamma in group.system.roots:
        for s in group.ring.elements():
            if (group.ring.one - s).is_unit():
                assert sl2_identity_check(group, gamma, s)


@pytest.mark.slow
def test_sl2_identity_g2_f5():
    group = chevalley_group(build_root_system("G2"), make_ring("gf:5"))
    for gamma in group.system.roots:
        for s in group.ring.elements():
            if s != group.ring.one:
                assert sl2_identity_check(group, gamma, s)


def test_order_a2_f2(table_a2_f2):
    assert len(table_a2_f2) == 168


def test_order_a2_f3(table_a2_f3):
    assert len(table_a2_f3) == 5616


@pytest.mark.slow
def test_order_a2_z4(table_a2_z4):
    assert len(table_a2_z4) == 43008
    assert len(table_a2_z4.congruence_kernel()) == 256


def test_cap(a2_f3):
    with pytest.raises(GroupTooLarge):
        enumerate_group(a2_f3, cap=1000)


def test_cap_during_closure(a2_f3):
    with pytest.raises(GroupTooLarge, match="exceeds the enumeration cap 1000"):
        enumerate_group(a2_f3, a2_f3.generators(), cap=1000)


@pytest.mark.parametrize("system,ring,order", [
    ("A2", "gf:2", 168),
    ("A2", "gf:3", 5616),
    ("A2", "gf:4", 20160),
    ("A2", "zmod:4", 43008),
    ("A2", "dual:2", 43008),
    ("B2", "gf:3", 25920),
    ("G2", "gf:5", 5_859_000_000),
])
def test_elementary_order_formula(system, ring, order):
    assert elementary_order(build_root_system(system), make_ring(ring)) == order


def test_center_order():
    assert center_order(build_root_system("A2"), make_ring("gf:4")) == 3
    assert center_order(build_root_system("A3"), make_ring("zmod:4")) == 2
    assert center_order(build_root_system("G2"), make_ring("gf:5")) == 1
    assert simply_connected_order(build_root_system("B2"), make_ring("gf:3")) == 51840


def test_order_formula_matches_enumeration(table_a2_f2, table_a2_f3):
    for table in (table_a2_f2, table_a2_f3):
        assert len(table) == elementary_order(table.group.system, table.group.ring)


@pytest.mark.slow
def test_order_formula_matches_enumeration_b2_f3(table_b2_f3):
    assert len(table_b2_f3) == elementary_order(table_b2_f3.group.system, table_b2_f3.group.ring)


def test_oversized_group_fails_before_enumeration():
    group = chevalley_group(build_root_system("G2"), make_ring("gf:5"))
    with pytest.raises(GroupTooLarge, match="5859000000"):
        enumerate_group(group)


def test_compact_storage(table_a2_f3):
    assert table_a2_f3.matrices.dtype == np.uint8
    assert table_a2_f3.element(5).matrix.dtype == np.int64
    g, h = table_a2_f3.element(100), table_a2_f3.element(2000)
    assert table_a2_f3.index(g * h) == table_a2_f3.multiply(100, 2000)


def test_words_re_evaluate(table_a2_f3):
    group = table_a2_f3.group
    for i in range(0, len(table_a2_f3), 397):
        assert group.from_word(table_a2_f3.word(i)) == table_a2_f3.element(i)


def test_centralizers(table_a2_f2):
    group = table_a2_f2.group
    assert list(table_a2_f2.center()) == [0]
    x = group.x(group.system.simple_roots[0], 1)
    assert len(table_a2_f2.centralizer(x)) == 8
    assert len(table_a2_f2.conjugacy_class(table_a2_f2.index(x))) == 21
    assert len(table_a2_f2.centralizer(group.identity())) == 168


def test_index_arithmetic(table_a2_f2):
    inv = table_a2_f2.inverses
    for i in range(len(table_a2_f2)):
        assert table_a2_f2.multiply(i, int(inv[i])) == 0
    classes = table_a2_f2.classes()
    assert sum(len(c) for c in classes) == 168
    assert len(classes) == 6


def test_subgroups(table_a2_f2):
    group = table_a2_f2.group
    x = table_a2_f2.index(group.x(group.system.simple_roots[0], 1))
    assert table_a2_f2.subgroup_closure([x]) == {0, x}
    assert table_a2_f2.normal_closure([x]) == set(range(168))
    assert table_a2_f2.normal_closure([x], limit=100) is None
    assert table_a2_f2.is_normal({0})
    assert not table_a2_f2.is_normal({0, x})


def test_commutant_a2_f2(a2_f2, table_a2_f2):
    report = check_commutant(a2_f2, e_table=table_a2_f2)
    assert report.order_e == report.order_g == 168
    assert report.e_equals_commutant
    assert report.width == 1


@pytest.mark.slow
def test_commutant_a2_f3(a2_f3, table_a2_f3):
    report = check_commutant(a2_f3, e_table=table_a2_f3)
    assert report.order_e == 5616
    assert report.order_g == 5616
    assert report.e_equals_commutant


def test_parse_word(a2_f3):
    g = a2_f3.parse_word("x[0,-1](1) * x[1,0](2)")
    a1, a2_ = a2_f3.system.simple_roots
    assert g == a2_f3.x(-a2_, 1) * a2_f3.x(a1, 2)
    assert [str(t) for t in g.word] == ["x[0,-1](1)", "x[1,0](2)"]
    assert a2_f3.parse_word("").is_identity()
    assert a2_f3.parse_word("w[1,0](1)") == a2_f3.w(a1, 1)


@pytest.mark.parametrize("word", ["x[1,0](1) *", "x[1,0](1) x[0,1](1)", "y[1,0](1)", "x[2,0](1)", "x[1,0](1"])
def test_parse_word_errors(a2_f3, word):
    with pytest.raises(ParseError):
        a2_f3.parse_word(word)


def test_parse_word_non_unit_torus(a2_f3):
    with pytest.raises(NonUnitInverse):
        a2_f3.parse_word("h[1,0](0)")


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_residue_map_is_multiplicative(a2_z4, seed):
    rng = np.random.default_rng(seed)
    g, h = a2_z4.random_element(rng), a2_z4.random_element(rng)
    assert reduce_mod_radical(g * h) == reduce_mod_radical(g) * reduce_mod_radical(h)
    assert reduce_mod_radical(g.inverse()) == reduce_mod_radical(g).inverse()


@given(st.sampled_from([("A2", "gf:3"), ("B2", "gf:3"), ("G2", "gf:5"), ("A2", "zmod:4"), ("A2", "dual:2")]),
       st.data())
@settings(max_examples=60, deadline=None)
def test_torus_element_from_weyl_elements(instance, data):
    group = chevalley_group(build_root_system(instance[0]), make_ring(instance[1]))
    alpha = data.draw(st.sampled_from(group.system.roots))
    t = data.draw(st.sampled_from(group.ring.units()))
    assert group.h(alpha, t) == group.w(alpha, t) * group.w(alpha, 1).inverse()
