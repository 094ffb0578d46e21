"""
Shared fixtures: root systems, rings and enumerated groups.

Tables are session scoped; A2 over Z/4 and B2 over F3 take a while to
enumerate and are only requested by tests marked slow.
"""

import pytest

from services.group import chevalley_group, enumerate_group
from services.rings import make_ring
from services.roots import Root, build_root_system


def root(*coeffs: int) -> Root:
    return Root(tuple(coeffs))


@pytest.fixture(scope="session")
def a2():
    return build_root_system("A2")


@pytest.fixture(scope="session")
def b2():
    return build_root_system("B2")


@pytest.fixture(scope="session")
def g2():
    return build_root_system("G2")


@pytest.fixture(scope="session")
def f2():
    return make_ring("gf:2")


@pytest.fixture(scope="session")
def f3():
    return make_ring("gf:3")


@pytest.fixture(scope="session")
def z4():
    return make_ring("zmod:4")


@pytest.fixture(scope="session")
def dual2():
    return make_ring("dual:2")


@pytest.fixture(scope="session")
def a2_f2(a2, f2):
    return chevalley_group(a2, f2)


@pytest.fixture(scope="session")
def a2_f3(a2, f3):
    return chevalley_group(a2, f3)


@pytest.fixture(scope="session")
def a2_z4(a2, z4):
    return chevalley_group(a2, z4)


@pytest.fixture(scope="session")
def table_a2_f2(a2_f2):
    return enumerate_group(a2_f2)


@pytest.fixture(scope="session")
def table_a2_f3(a2_f3):
    return enumerate_group(a2_f3)


@pytest.fixture(scope="session")
def table_a2_z4(a2_z4):
    return enumerate_group(a2_z4)


@pytest.fixture(scope="session")
def b2_f3(b2, f3):
    return chevalley_group(b2, f3)


@pytest.fixture(scope="session")
def table_b2_f3(b2_f3):
    return enumerate_group(b2_f3)
