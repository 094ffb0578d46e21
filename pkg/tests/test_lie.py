import numpy as np
import pytest
import sympy

from services.lie import (
    adjoint_generator,
    commutator_constants,
    compute_structure_constants,
    torus_generator,
)
from services.rings import make_ring
from services.roots import build_root_system


@pytest.mark.parametrize("label", ["A2", "A3", "B2", "C3", "G2", "D4"])
def test_antisymmetry_and_magnitude(label):
    system = build_root_system(label)
    consts = compute_structure_constants(system)
    for (alpha, beta), n in consts.N.items():
        assert consts.N[(beta, alpha)] == -n
        p, _ = system.root_string(alpha, beta)
        assert abs(n) == p + 1


@pytest.mark.slow
@pytest.mark.parametrize("label", ["B3", "F4", "E6"])
def test_jacobi_on_larger_systems(label):
    compute_structure_constants(build_root_system(label)).verify_jacobi()


def test_extraspecial_values(a2, g2):
    a1, a2_ = a2.simple_roots
    assert compute_structure_constants(a2).N[(a1, a2_)] == 1
    g1, g2_ = g2.simple_roots
    assert abs(compute_structure_constants(g2).N[(g1, g1 + g2_)]) == 2


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_templates(label):
    system = build_root_system(label)
    consts = compute_structure_constants(system)
    t, s = sympy.symbols("t s")
    for alpha in system.roots:
        template = adjoint_generator(system, consts, alpha)
        assert np.array_equal(template.evaluate_integer(0), np.eye(consts.dim, dtype=np.int64))
        for c in template.coefficients:
            assert c.dtype.kind == "i"
        x_t, x_s = template.as_sympy(t), template.as_sympy(s)
        assert (x_t * x_s - template.as_sympy(t + s)).expand() == sympy.zeros(consts.dim, consts.dim)
        if consts.dim <= 10:
            assert sympy.expand(x_t.det()) == 1


def test_first_order_entry(a2):
    consts = compute_structure_constants(a2)
    a1, a2_ = a2.simple_roots
    template = adjoint_generator(a2, consts, a1)
    linear = template.coefficients[1]
    assert linear[a2.index(a1 + a2_), a2.index(a2_)] == consts.N[(a1, a2_)]


def test_torus_generator(a2):
    ring = make_ring("gf:3")
    a1 = a2.simple_roots[0]
    h = torus_generator(a2, a1, 2, ring)
    assert h[a2.index(a1), a2.index(a1)] == 1
    assert np.array_equal(torus_generator(a2, a1, 1, ring), np.eye(8, dtype=np.int64))


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_commutator_constants_follow_root_combinations(label):
    system = build_root_system(label)
    consts = compute_structure_constants(system)
    for alpha in system.roots:
        for beta in system.roots:
            if beta in (alpha, -alpha):
                continue
            terms = commutator_constants(system, consts, alpha, beta)
            if system.is_root(alpha + beta):
                first = terms[0]
                assert (first.i, first.j) == (1, 1)
                assert first.constant == consts.N[(alpha, beta)]
            else:
                assert terms == []
            for term in terms:
                assert system.is_root(term.root)
