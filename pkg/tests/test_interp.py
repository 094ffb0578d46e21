import numpy as np
import pytest

from services.errors import IsomorphismFailure
from services.gauss import decomposer
from services.group import apply_ring_automorphism, chevalley_group, enumerate_group
from services.interp import (
    ParameterTuple,
    TableChevalleyGroup,
    TableRing,
    Theta,
    delta_code,
    find_isomorphism,
    gauss_forms,
    group_from_ring,
    interpreted_ring_for,
    parameter_report,
    ring_frame,
    ring_from_group,
    round_trip_ring,
    theta_isomorphism,
    theta_sampled,
    verify_parameter_formula,
)
from services.rings import make_ring
from services.roots import build_root_system


@pytest.mark.parametrize("system,ring", [("A2", "gf:2"), ("A2", "gf:3"), ("A2", "zmod:4"), ("A2", "dual:2"),
                                         ("A2", "gf:4"), ("B2", "gf:3"), ("B2", "zmod:9"), ("G2", "gf:5"),
                                         ("A3", "zmod:4")])
def test_ring_round_trip(system, ring):
    report = round_trip_ring(build_root_system(system), make_ring(ring))
    assert report.passed, report.failures
    assert report.exhaustive
    assert report.checked == make_ring(ring).size ** 2


def test_ring_round_trip_goes_through_codes(a2_f3):
    report = round_trip_ring(a2_f3.system, a2_f3.ring, samples=30, seed=2)
    assert report.passed, report.failures
    assert report.details["codes_decoded"] == 30
    delta = ring_frame(a2_f3.system).delta
    gauss = decomposer(a2_f3)
    for t in a2_f3.ring.elements():
        assert gauss.decode(delta_code(a2_f3.system, a2_f3.ring, delta, t)) == a2_f3.x(delta, t)


def test_ring_from_given_group(a2, a2_f3):
    interpreted = ring_from_group(None, a2, a2_f3.ring, group=a2_f3)
    assert interpreted.group is a2_f3
    with pytest.raises(IsomorphismFailure):
        ring_from_group(None, a2, make_ring("gf:2"), group=a2_f3)


def test_frames(a2, b2, g2):
    assert ring_frame(a2).kind == "a2"
    frame = ring_frame(b2)
    nu, mu = b2.simple_roots
    assert (frame.kind, frame.a, frame.b, frame.delta, frame.extra) == ("b2", mu, nu, mu + nu, mu.scale(2) + nu)
    g2_frame = ring_frame(g2)
    assert g2_frame.kind == "a2" and g2.is_long(g2_frame.delta)


def test_interpreted_product_over_f3(a2_f3):
    interpreted = ring_from_group(None, a2_f3.system, a2_f3.ring)
    delta = interpreted.frame.delta
    two = a2_f3.x(delta, 2)
    assert interpreted.mul(two, two) == a2_f3.x(delta, 1)
    assert interpreted.add(two, two) == a2_f3.x(delta, 1)
    assert interpreted.element(interpreted.zero).is_identity()


def test_table_ring_axioms():
    ring = TableRing.from_local_ring(make_ring("zmod:4"))
    assert ring.check_axioms() is None
    assert ring.is_local()
    assert ring.characteristic == 4
    assert ring.units() == [1, 3]
    assert ring.inverse(3) == 3
    assert ring.power(3, -1) == 3
    broken = ring.mul.copy()
    broken[2, 3] = broken[3, 2] = 1
    assert TableRing(ring.add, broken, ring.zero, ring.one).check_axioms() is not None


def test_non_local_table_ring():
    # Z/6 is a ring but not local.
    r = np.arange(6)
    ring = TableRing((r[:, None] + r) % 6, (r[:, None] * r) % 6, 0, 1)
    assert ring.check_axioms() is None
    assert not ring.is_local()


def test_find_isomorphism():
    gf4 = make_ring("gf:4")
    mapping = find_isomorphism(gf4, TableRing.from_local_ring(gf4))
    assert mapping is not None and sorted(mapping.values()) == list(range(4))
    assert find_isomorphism(make_ring("zmod:4"), TableRing.from_local_ring(make_ring("dual:2"))) is None
    assert find_isomorphism(make_ring("zmod:4"), TableRing.from_local_ring(make_ring("gf:3"))) is None


def test_table_group_matches_matrices(a2_z4):
    ring = TableRing.from_local_ring(a2_z4.ring)
    templates = {alpha: a2_z4.template(alpha) for alpha in a2_z4.system.roots}
    target = TableChevalleyGroup(a2_z4.system, ring, templates)
    alpha = a2_z4.system.simple_roots[0]
    expected = a2_z4.entries(a2_z4.x(alpha, 3))
    indices = target.x(alpha, a2_z4.ring.index_of(a2_z4.ring(3)))
    assert all(a2_z4.ring.from_index(int(indices[i, j])).coords == tuple(expected[i, j])
               for i in range(8) for j in range(8))
    assert np.array_equal(target.x(alpha, ring.zero), target.identity())


def test_coded_group_a2_f2(table_a2_f2):
    report = group_from_ring(table_a2_f2.group.system, table_a2_f2.group.ring, table_a2_f2)
    assert report.code_space == 512
    assert report.classes == 168
    assert report.surjective and not report.sampled


@pytest.mark.slow
def test_coded_group_a2_f3(table_a2_f3):
    report = group_from_ring(table_a2_f3.group.system, table_a2_f3.group.ring, table_a2_f3)
    assert report.classes == 5616
    assert report.surjective


def test_coded_group_sampling(table_a2_f3):
    report = group_from_ring(table_a2_f3.group.system, table_a2_f3.group.ring, table_a2_f3,
                             limit=10, samples=50, seed=4)
    assert report.sampled and report.decoded == 50
    assert report.surjective is None
    assert report.classes <= 50


def test_theta_a2_f2(table_a2_f2):
    report = theta_isomorphism(table_a2_f2, pairs=None)
    assert report.passed, report.failures
    assert report.details == {"order": 168, "images": 168}
    assert report.exhaustive


def test_theta_identity(table_a2_f2):
    theta = Theta(table_a2_f2, ring_from_group(table_a2_f2, table_a2_f2.group.system, table_a2_f2.group.ring))
    assert np.array_equal(theta(table_a2_f2.group.identity()), theta.target.identity())


def test_theta_without_table_agrees(table_a2_f2):
    group = table_a2_f2.group
    interpreted = ring_from_group(table_a2_f2, group.system, group.ring)
    with_table, without = Theta(table_a2_f2, interpreted), Theta(None, interpreted)
    for i in range(0, len(table_a2_f2), 17):
        g = table_a2_f2.element(i)
        assert np.array_equal(with_table(g), without(g))


def test_theta_sampled_a2_z4(a2_z4):
    report = theta_sampled(a2_z4, pairs=30, seed=1)
    assert report.passed, report.failures
    assert not report.exhaustive and report.checked == 30
    assert report.details["sampled"]


@pytest.mark.slow
def test_theta_a2_f3_sampled(table_a2_f3):
    report = theta_isomorphism(table_a2_f3, pairs=200, seed=2)
    assert report.passed and not report.exhaustive
    assert report.details["images"] == 5616


def test_parameter_formula_a2_f2(table_a2_f2):
    group = table_a2_f2.group
    forms = gauss_forms(table_a2_f2)
    standard = ParameterTuple.standard(group)
    report = parameter_report(table_a2_f2, standard, forms)
    assert report.accepted, report.witnesses
    for alpha in group.system.roots:
        assert not verify_parameter_formula(table_a2_f2, standard.replace(alpha, group.identity()), forms)
    ring = interpreted_ring_for(table_a2_f2, standard)
    assert find_isomorphism(group.ring, ring) is not None


def test_swapped_parameters_are_rejected(table_a2_f2):
    group = table_a2_f2.group
    a1, a2_ = group.system.simple_roots
    standard = ParameterTuple.standard(group)
    swapped = standard.replace(a1, standard[a2_]).replace(a2_, standard[a1])
    assert not verify_parameter_formula(table_a2_f2, swapped, gauss_forms(table_a2_f2))


@pytest.mark.slow
def test_parameter_formula_a2_f3(table_a2_f3):
    group = table_a2_f3.group
    forms = gauss_forms(table_a2_f3)
    standard = ParameterTuple.standard(group)
    assert verify_parameter_formula(table_a2_f3, standard, forms)
    a1, a2_ = group.system.simple_roots
    for alpha in group.system.roots:
        assert not verify_parameter_formula(table_a2_f3, standard.replace(alpha, group.identity()), forms)
        assert not verify_parameter_formula(table_a2_f3, standard.replace(alpha, group.w(a1, 1)), forms)
    swapped = standard.replace(a1, standard[a2_]).replace(a2_, standard[a1])
    assert not verify_parameter_formula(table_a2_f3, swapped, forms)


@pytest.mark.slow
def test_automorphic_tuples_over_f4():
    group = chevalley_group(build_root_system("A2"), make_ring("gf:4"))
    table = enumerate_group(group)
    forms = gauss_forms(table)
    standard = ParameterTuple.standard(group)
    ring = group.ring
    x = ring.parse("x")
    h = group.h(group.system.simple_roots[0], x)
    for candidate in (standard.map(lambda g: apply_ring_automorphism(g, ring.frobenius)),
                      standard.map(lambda g: g.conjugate(h))):
        assert verify_parameter_formula(table, candidate, forms)
        assert find_isomorphism(ring, interpreted_ring_for(table, candidate)) is not None
