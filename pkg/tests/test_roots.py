import pytest

from models.enums import RootFamily
from services.errors import ParseError, ProportionalRoots, RankTooSmall
from services.roots import build_root_system, parse_root, parse_system
from tests.conftest import root

SYSTEMS = (
    [f"A{l}" for l in range(2, 7)]
    + [f"B{l}" for l in range(2, 7)]
    + [f"C{l}" for l in range(3, 7)]
    + [f"D{l}" for l in range(4, 7)]
    + ["E6", "F4", "G2"]
)

EXPECTED_COUNTS = {
    "A": lambda l: l * (l + 1),
    "B": lambda l: 2 * l * l,
    "C": lambda l: 2 * l * l,
    "D": lambda l: 2 * l * (l - 1),
}


@pytest.mark.parametrize("label", SYSTEMS)
def test_root_counts_and_basic_invariants(label):
    system = build_root_system(label)
    family = label[0]
    if family in EXPECTED_COUNTS:
        assert len(system.roots) == EXPECTED_COUNTS[family](system.rank)
    assert len(system.roots) == 2 * len(system.positive_roots)
    for alpha in system.roots:
        assert system.pairing(alpha, alpha) == 2
        assert system.is_root(-alpha)
        signs = {c > 0 for c in alpha.coeffs if c}
        assert len(signs) == 1


@pytest.mark.parametrize("label", SYSTEMS)
def test_positive_order_by_height(label):
    system = build_root_system(label)
    heights = [r.height for r in system.positive_roots]
    assert heights == sorted(heights)
    assert system.positive_roots[:system.rank] == system.simple_roots
    assert system.highest_root == system.positive_roots[-1]


@pytest.mark.parametrize("label", ["E7", "E8"])
@pytest.mark.slow
def test_large_exceptional_counts(label):
    assert len(build_root_system(label).roots) == {"E7": 126, "E8": 240}[label]


def test_g2_roots(g2):
    expected = {root(1, 0), root(0, 1), root(1, 1), root(2, 1), root(3, 1), root(3, 2)}
    assert set(g2.positive_roots) == expected
    assert set(g2.roots) == expected | {-r for r in expected}


def test_b2_roots_and_pairing(b2):
    nu, mu = b2.simple_roots
    assert b2.is_long(nu) and not b2.is_long(mu)
    assert set(b2.positive_roots) == {mu, nu, mu + nu, mu.scale(2) + nu}
    assert b2.pairing(mu + nu, -nu) == -1


def test_a2_pairing(a2):
    a1, a2_ = a2.simple_roots
    assert a2.pairing(a1, a2_) == -1
    assert len(a2.positive_roots) == 3


def test_b_set_g2(g2):
    a1, a2_ = g2.simple_roots
    expected = {a1, -a2_, a1.scale(3) + a2_, a1.scale(3) + a2_.scale(2), -(a1.scale(3) + a2_.scale(2))}
    assert g2.b_set(a1) == expected


def test_b_set_a2(a2):
    a1, a2_ = a2.simple_roots
    assert a2.b_set(a1) == {a1, -a2_, a1 + a2_}


@pytest.mark.parametrize("label", SYSTEMS)
def test_deletion_covers_everything_but_alpha(label):
    system = build_root_system(label)
    for alpha in system.roots:
        deleted, trace = system.deletion_closure(alpha)
        assert deleted == frozenset(system.roots) - {alpha}
        assert {step.root for step in trace} == deleted


@pytest.mark.parametrize("label", ["E7", "E8"])
@pytest.mark.slow
def test_deletion_covers_large_exceptional(label):
    system = build_root_system(label)
    for alpha in system.roots:
        deleted, trace = system.deletion_closure(alpha)
        assert deleted == frozenset(system.roots) - {alpha}
        assert len(trace) == len(system.roots) - 1


@pytest.mark.parametrize("label", ["B2", "B3", "C3", "F4", "G2"])
def test_torus_witnesses_have_odd_pairing(label):
    system = build_root_system(label)
    for alpha in system.roots:
        deleted_by_b = {gamma for gamma in system.roots
                        if any(system.is_root(beta + gamma) or (beta + gamma).is_zero
                               for beta in system.b_set(alpha))}
        _, trace = system.deletion_closure(alpha)
        assert [system.index(step.root) for step in trace] == sorted(system.index(step.root) for step in trace)
        for step in trace:
            if step.rule == "torus":
                assert step.root not in deleted_by_b
                assert system.inner(step.witness, alpha) == 0
                assert system.pairing(step.witness, step.root) % 2 == 1


@pytest.mark.parametrize("label,alpha", [("G2", (1, 0)), ("A3", (1, 0, 0)), ("A3", (0, 1, 0))])
def test_deletion_by_b_rule_only(label, alpha):
    system = build_root_system(label)
    _, trace = system.deletion_closure(root(*alpha))
    assert {step.rule for step in trace} == {"B"}


def test_b2_torus_rule(b2):
    nu, mu = b2.simple_roots
    _, trace = b2.deletion_closure(mu)
    by_torus = {step.root for step in trace if step.rule == "torus"}
    by_b = {step.root for step in trace if step.rule == "B"}
    assert by_torus == {-nu, mu.scale(2) + nu}
    assert by_b == {-mu, nu, mu + nu, -(mu + nu), -(mu.scale(2) + nu)}
    for step in trace:
        if step.rule == "torus":
            assert b2.inner(step.witness, mu) == 0


def test_root_strings(a2, g2, b2):
    assert a2.root_string(*a2.simple_roots) == (0, 1)
    assert g2.root_string(*g2.simple_roots) == (0, 3)
    nu, mu = b2.simple_roots
    assert b2.root_string(nu, mu.scale(2) + nu) == (0, 0)
    for alpha in g2.roots:
        for beta in g2.roots:
            if beta not in (alpha, -alpha):
                p, q = g2.root_string(alpha, beta)
                assert p + q <= 3


def test_root_string_rejects_proportional(a2):
    alpha = a2.simple_roots[0]
    with pytest.raises(ProportionalRoots):
        a2.root_string(alpha, -alpha)


def test_a2_pair(a2, b2, g2):
    assert a2.a2_pair() == tuple(a2.simple_roots)
    assert b2.a2_pair() is None
    a, b = g2.a2_pair()
    assert g2.is_long(a) and g2.is_long(b)
    assert g2.is_root(a + b)


@pytest.mark.parametrize("label", ["A1", "D3", "E5", "F3", "G3", "B1"])
def test_rank_too_small(label):
    with pytest.raises(RankTooSmall):
        build_root_system(label)


@pytest.mark.parametrize("text", ["[1,a]", "1,0", "[1,0", ""])
def test_bad_root_literals(text):
    with pytest.raises(ParseError):
        parse_root(text, 2)


def test_parse_system():
    assert parse_system("g2") == (RootFamily.G, 2)
    with pytest.raises(ParseError):
        parse_system("X2")
    with pytest.raises(ParseError):
        build_root_system("A2").coerce("[1,1,1]")
