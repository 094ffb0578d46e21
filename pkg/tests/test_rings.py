import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.errors import NonUnitInverse, NotPrime, ParseError, RingMismatch
from services.rings import check_required_units, make_ring, missing_units, require_units
from services.errors import MissingUnit
from services.roots import build_root_system

DESCRIPTORS = ["zmod:4", "zmod:9", "zmod:8", "gf:2", "gf:3", "gf:4", "gf:5", "gf:9", "dual:2", "dual:3", "dual:4"]


def elements_of(descriptor):
    ring = make_ring(descriptor)
    return st.integers(0, ring.size - 1).map(ring.from_index)


@st.composite
def ring_triples(draw):
    descriptor = draw(st.sampled_from(DESCRIPTORS))
    a, b, c = (draw(elements_of(descriptor)) for _ in range(3))
    return a, b, c


@given(ring_triples())
@settings(max_examples=300)
def test_ring_axioms(triple):
    a, b, c = triple
    ring = a.ring
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a + ring.zero == a and a * ring.one == a
    assert a + (-a) == ring.zero


@pytest.mark.parametrize("descriptor", DESCRIPTORS)
def test_local_ring_structure(descriptor):
    ring = make_ring(descriptor)
    units, radical = ring.units(), ring.radical()
    assert len(units) + len(radical) == ring.size
    assert not set(units) & set(radical)
    for a in radical:
        for b in radical:
            assert (a + b).in_radical()
        for b in ring.elements():
            assert (a * b).in_radical()
    for u in units:
        assert u * u.inverse() == ring.one


@pytest.mark.parametrize("descriptor", DESCRIPTORS)
def test_residue_is_surjective_homomorphism(descriptor):
    ring = make_ring(descriptor)
    field = ring.residue_field
    images = {ring.residue(a) for a in ring.elements()}
    assert images == set(field.elements())
    kernel = [a for a in ring.elements() if ring.residue(a) == field.zero]
    assert len(kernel) * field.size == ring.size
    assert set(kernel) == set(ring.radical())
    for abar in field.elements():
        assert ring.residue(ring.lift(abar)) == abar
    for a in ring.elements()[:8]:
        for b in ring.elements()[:8]:
            assert ring.residue(a * b) == ring.residue(a) * ring.residue(b)
            assert ring.residue(a + b) == ring.residue(a) + ring.residue(b)


def test_z4():
    ring = make_ring("zmod:4")
    assert [str(u) for u in ring.units()] == ["1", "3"]
    assert [str(a) for a in ring.radical()] == ["0", "2"]
    assert ring(3).inverse() == ring(3)
    assert not ring(2).is_unit() and ring(2).in_radical()
    assert ring.residue(ring(3)) == ring.residue_field.one
    assert ring.lift(ring.residue_field.one) == ring.one


def test_fields_have_zero_radical():
    ring = make_ring("gf:3")
    assert ring.radical() == [ring.zero]
    assert ring.is_field()


def test_dual_numbers():
    ring = make_ring("dual:2")
    assert ring.size == 4
    assert {str(u) for u in ring.units()} == {"1", "1+e"}
    e = ring.parse("e")
    assert e * e == ring.zero
    assert ring.residue(ring.parse("1+e")) == ring.residue_field.one


def test_gf4_frobenius_is_an_automorphism():
    ring = make_ring("gf:4")
    images = {ring.frobenius(a) for a in ring.elements()}
    assert images == set(ring.elements())
    x = ring.parse("x")
    assert ring.frobenius(x) != x
    assert ring.frobenius(ring.frobenius(x)) == x


def test_inverse_of_one():
    for descriptor in DESCRIPTORS:
        ring = make_ring(descriptor)
        assert ring.one.inverse() == ring.one


def test_non_unit_inverse():
    with pytest.raises(NonUnitInverse):
        make_ring("zmod:4")(2).inverse()


@pytest.mark.parametrize("descriptor", ["zmod:6", "gf:12", "dual:1", "zmod:0"])
def test_not_prime(descriptor):
    with pytest.raises(NotPrime):
        make_ring(descriptor)


@pytest.mark.parametrize("descriptor", ["zmod4", "foo:4", "gf:", ""])
def test_bad_descriptor(descriptor):
    with pytest.raises(ParseError):
        make_ring(descriptor)


def test_literals():
    ring = make_ring("dual:4")
    a = ring.parse("x+x*e")
    assert ring.parse(ring.format(a)) == a
    with pytest.raises(ParseError):
        make_ring("zmod:4").parse("e")
    with pytest.raises(ParseError):
        ring.parse("1/2")


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        make_ring("gf:3").one + make_ring("gf:5").one


def test_required_units():
    b2, g2, a3 = build_root_system("B2"), build_root_system("G2"), build_root_system("A3")
    assert not check_required_units(make_ring("zmod:4"), b2)
    assert not check_required_units(make_ring("zmod:9"), g2)
    assert check_required_units(make_ring("gf:5"), g2)
    assert check_required_units(make_ring("zmod:4"), a3)
    assert missing_units(make_ring("zmod:9"), g2) == [3]
    with pytest.raises(MissingUnit):
        require_units(make_ring("zmod:4"), b2)
