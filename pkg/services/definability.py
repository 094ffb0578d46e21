"""
Definable subsets of an enumerated elementary group, evaluated semantically.

Quantifiers over the group become loops over a FiniteGroupTable. Where a
quantifier ranges over all of E, it is restricted by an exact equivalence
first: C(A) = C(x) forces A into the centralizer of C(x), so only that
set is scanned.
"""

import logging
import weakref
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from services.errors import (
    InclusionViolated,
    MismatchWithRootSubgroup,
    NotASubgroup,
    NotFound,
)
from services.gauss import decomposer
from services.group import ChevalleyGroup, FiniteGroupTable, GroupElement, chevalley_group, reduce_mod_radical
from services.roots import Root

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DefinableSet:
    """A subset of an enumerated group together with the recipe defining it."""
    elements: FrozenSet[int]
    recipe: str
    parameters: Tuple[Tuple[str, Any], ...] = ()

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, index: int) -> bool:
        return index in self.elements


class _TableContext:
    """Per-table caches: class depths for phi_N, centralizer data per root."""

    def __init__(self, table: FiniteGroupTable):
        self.kernel: Optional[FrozenSet[int]] = None
        self.depth: Dict[int, Optional[int]] = {}
        self.closure: Dict[int, Optional[FrozenSet[int]]] = {}
        self.centralizers: Dict[Root, Tuple[np.ndarray, np.ndarray]] = {}
        self.g_alpha: Dict[Root, DefinableSet] = {}


_contexts: "weakref.WeakKeyDictionary[FiniteGroupTable, _TableContext]" = weakref.WeakKeyDictionary()


def _context(table: FiniteGroupTable) -> _TableContext:
    if table not in _contexts:
        _contexts[table] = _TableContext(table)
    return _contexts[table]


def _index(table: FiniteGroupTable, A) -> int:
    return table.index(A) if isinstance(A, GroupElement) else int(A)


def congruence_kernel(table: FiniteGroupTable) -> FrozenSet[int]:
    """ker(reduce_mod_radical) inside the table, computed from residues."""
    ctx = _context(table)
    if ctx.kernel is None:
        ctx.kernel = frozenset(table.congruence_kernel().tolist())
    return ctx.kernel


# phi_N and Normal_{M,N}

def _class_depth(table: FiniteGroupTable, i: int) -> Optional[int]:
    """
    Least N with P_N(A) = NC(A), or None when NC(A) is all of E.

    P_N(A) is the set of products of at most N conjugates of A and A^-1.
    Cached per conjugacy class.
    """
    ctx = _context(table)
    c = table.class_index(i)
    if c in ctx.depth:
        return ctx.depth[c]
    closure = table.normal_closure([i], limit=len(table) // 2)
    if closure is None or len(closure) == len(table):
        ctx.depth[c], ctx.closure[c] = None, None
        return None
    conjugates = set(table.conjugacy_class(i).tolist()) | set(table.conjugacy_class(int(table.inverses[i])).tolist())
    reached = {0}
    depth = 0
    while reached != closure:
        grown = reached | table.products(sorted(reached), sorted(conjugates))
        if grown == reached:
            raise NotASubgroup("Conjugate products stall below the normal closure")
        reached = grown
        depth += 1
    ctx.depth[c], ctx.closure[c] = depth, frozenset(closure)
    return depth


def normal_closure_of(table: FiniteGroupTable, A) -> FrozenSet[int]:
    i = _index(table, A)
    _class_depth(table, i)
    closure = _context(table).closure.get(table.class_index(i))
    return closure if closure is not None else frozenset(range(len(table)))


def phi_N(table: FiniteGroupTable, A, N: int) -> bool:
    """
    True iff the products of at most N conjugates of A, A^-1 form a proper normal subgroup.

    Args:
        table: Enumerated group E
        A: GroupElement or table index
        N: Product length bound
    """
    depth = _class_depth(table, _index(table, A))
    return depth is not None and depth <= N


def phi_set(table: FiniteGroupTable, N: int) -> Set[int]:
    """All elements satisfying phi_N; a union of conjugacy classes."""
    result: Set[int] = set()
    for orbit in table.classes():
        if phi_N(table, int(orbit[0]), N):
            result.update(orbit.tolist())
    return result


def _product_levels(table: FiniteGroupTable, S: Set[int], up_to: int) -> List[Set[int]]:
    """Q_0 .. Q_up_to with Q_k the products of at most k elements of S."""
    levels = [{0}]
    for _ in range(up_to):
        current = levels[-1]
        if len(levels) > 1 and current == levels[-2]:
            levels.append(current)
            continue
        levels.append(current | table.products(sorted(current), sorted(S)))
    return levels


def e_j_by_formula(table: FiniteGroupTable, M: int, N: int) -> DefinableSet:
    """
    Normal_{M,N}: products of at most M elements satisfying phi_N.

    Raises:
        NotASubgroup: if the products of length M+1 add new elements
    """
    S = phi_set(table, N)
    levels = _product_levels(table, S, M + 1)
    if levels[M] != levels[M + 1]:
        raise NotASubgroup(f"Normal_{{{M},{N}}} is not closed under multiplication")
    result = levels[M]
    if not table.is_normal(result):
        raise NotASubgroup(f"Normal_{{{M},{N}}} is not normal")
    return DefinableSet(frozenset(result), "Normal_{M,N}", (("M", M), ("N", N)))


def find_M_N(table: FiniteGroupTable, n_cap: int = 8, m_cap: int = 8) -> Tuple[int, int]:
    """
    Least N, then least M, such that Normal_{M,N} is a subgroup equal to E_J.

    Raises:
        NotFound: if no pair within the caps works
    """
    kernel = congruence_kernel(table)
    for N in range(n_cap + 1):
        S = phi_set(table, N)
        levels = _product_levels(table, S, m_cap + 1)
        for M in range(m_cap + 1):
            if levels[M] == levels[M + 1]:
                if levels[M] == kernel:
                    logger.info("%s: Normal_{M,N} defines E_J at M=%d, N=%d", table.group.label, M, N)
                    return M, N
                break
    raise NotFound(f"No (M, N) with M <= {m_cap}, N <= {n_cap} defines E_J")


def check_normal_in_kernel(table: FiniteGroupTable, N: int) -> bool:
    """Every A with phi_N(A) has its normal closure inside E_J."""
    kernel = congruence_kernel(table)
    for orbit in table.classes():
        i = int(orbit[0])
        if phi_N(table, i, N) and not normal_closure_of(table, i) <= kernel:
            return False
    return True


# Centralizer constructions

def root_subgroup(table: FiniteGroupTable, alpha: Root, units_only: bool = False) -> FrozenSet[int]:
    """X_alpha(R), or X_alpha(R*), as table indices."""
    group = table.group
    values = group.ring.units() if units_only else group.ring.elements()
    return frozenset(table.index(group.x(alpha, t)) for t in values)


def _centralizer_data(table: FiniteGroupTable, alpha: Root) -> Tuple[np.ndarray, np.ndarray]:
    """
    (mask of C(x_alpha(1)), indices of elements commuting with all of C(x_alpha(1))).
    """
    ctx = _context(table)
    if alpha not in ctx.centralizers:
        x = table.group.x(alpha, 1)
        mask_x = table.centralizer_mask(x)
        generators = table.generating_subset(np.nonzero(mask_x)[0])
        double = np.nonzero(table.common_centralizer_mask(generators))[0]
        ctx.centralizers[alpha] = (mask_x, double)
        logger.debug("%s: |C(x_%s(1))| = %d, |Z(C)| = %d",
                     table.group.label, alpha, int(mask_x.sum()), len(double))
    return ctx.centralizers[alpha]


def g_alpha_set(table: FiniteGroupTable, alpha) -> DefinableSet:
    """G_alpha = {g in E : C(g) = C(x_alpha(1))}."""
    alpha = table.group.system.coerce(alpha)
    ctx = _context(table)
    if alpha not in ctx.g_alpha:
        mask_x, candidates = _centralizer_data(table, alpha)
        members = frozenset(int(z) for z in candidates
                            if np.array_equal(table.centralizer_mask(int(z)), mask_x))
        ctx.g_alpha[alpha] = DefinableSet(members, "G_alpha", (("alpha", str(alpha)),))
    return ctx.g_alpha[alpha]


@dataclass
class SandwichReport:
    alpha: str
    x_r: int
    middle: int
    x_units: int
    e_j: int
    middle_parameters: List[str] = field(default_factory=list)


def check_sandwich(table: FiniteGroupTable, alpha) -> SandwichReport:
    """
    X_alpha(R) >= X_alpha(R) E_J meet G_alpha >= X_alpha(R*).

    Raises:
        InclusionViolated: if either inclusion fails
    """
    group = table.group
    alpha = group.system.coerce(alpha)
    x_r = root_subgroup(table, alpha)
    x_units = root_subgroup(table, alpha, units_only=True)
    kernel = congruence_kernel(table)
    middle = table.products(sorted(x_r), sorted(kernel)) & g_alpha_set(table, alpha).elements
    if not x_units <= middle:
        missing = sorted(x_units - middle)[0]
        raise InclusionViolated(f"X_{alpha}(R*) element {table.word(missing)} is not in the middle set")
    if not middle <= x_r:
        extra = sorted(middle - x_r)[0]
        raise InclusionViolated(f"Middle set element {table.word(extra)} is not in X_{alpha}(R)")
    by_index = {table.index(group.x(alpha, t)): t for t in group.ring.elements()}
    parameters = sorted(str(by_index[i]) for i in middle)
    return SandwichReport(str(alpha), len(x_r), len(middle), len(x_units), len(kernel), parameters)


def _residue_preimage(table: FiniteGroupTable, alpha: Root) -> Set[int]:
    """Elements whose reduction lies in X_alpha(R/J)."""
    group = table.group
    field = group.ring.residue_field
    residue = chevalley_group(group.system, field)
    targets = {
        field.coords_from_blocks(residue.x(alpha, t).matrix).astype(np.uint16).tobytes()
        for t in field.elements()
    }
    return {i for i, key in enumerate(table.residue_keys()) if key in targets}


def root_subgroup_definable(table: FiniteGroupTable, alpha) -> DefinableSet:
    """
    Preimage of X_alpha(R/J) meet {AB : for all x, [x, x_alpha(1)] = 1 iff [A,x] = 1 and [B,x] = 1}.

    Raises:
        MismatchWithRootSubgroup: if the result differs from X_alpha(R)
    """
    alpha = table.group.system.coerce(alpha)
    mask_x, candidates = _centralizer_data(table, alpha)
    masks = {int(z): table.centralizer_mask(int(z)) for z in candidates}
    pairs = [(a, b) for a in masks for b in masks if np.array_equal(masks[a] & masks[b], mask_x)]
    products = {table.multiply(a, b) for a, b in pairs}
    result = frozenset(products & _residue_preimage(table, alpha))
    expected = root_subgroup(table, alpha)
    if result != expected:
        raise MismatchWithRootSubgroup(
            f"Definable set for {alpha} has {len(result)} elements, X_alpha(R) has {len(expected)}")
    return DefinableSet(result, "root_subgroup", (("alpha", str(alpha)), ("pairs", len(pairs))))


def check_weyl_equivariance(table: FiniteGroupTable, alpha) -> bool:
    """G_{s_b(alpha)} = w_b(1) G_alpha w_b(1)^-1 for every simple root b."""
    group = table.group
    alpha = group.system.coerce(alpha)
    members = sorted(g_alpha_set(table, alpha).elements & root_subgroup(table, alpha))
    for beta in group.system.simple_roots:
        w = table.index(group.w(beta, 1))
        image = set(table.conjugates(members, w).tolist())
        if image != set(g_alpha_set(table, group.system.reflect(alpha, beta)).elements):
            return False
    return True


@dataclass
class TorusLemmaReport:
    alpha: str
    checked_elements: int
    orthogonal_roots: int
    torus_elements: int
    generated_torus: int
    centralizing_torus: int
    holds: bool
    witnesses: List[str] = field(default_factory=list)


def centralizing_torus(table: FiniteGroupTable, alpha) -> FrozenSet[int]:
    """Diagonal elements of the table commuting with x_alpha(1), found without the h generators."""
    alpha = table.group.system.coerce(alpha)
    mask = table.centralizer_mask(table.group.x(alpha, 1)) & table.diagonal_mask()
    return frozenset(np.nonzero(mask)[0].tolist())


def check_torus_lemma(table: FiniteGroupTable, alpha,
                      torus: Optional[Sequence[GroupElement]] = None) -> TorusLemmaReport:
    """
    Torus elements orthogonal to alpha fix the sandwich middle set factor by factor.

    Each h in `torus` (default: h_b(a) for roots b orthogonal to alpha and
    units a) must be one of the diagonal table elements centralizing
    x_alpha(1), and so must every element of the subgroup they generate.
    Then h commutes with every g in G_alpha meet X_alpha(R), and with each
    unipotent factor of the Gauss form of g.
    """
    group = table.group
    system = group.system
    alpha = system.coerce(alpha)
    orthogonal = [beta for beta in system.roots if system.inner(beta, alpha) == 0]
    if torus is None:
        torus = [group.h(beta, a) for beta in orthogonal for a in group.ring.units()]
    centralizing = centralizing_torus(table, alpha)
    witnesses = [f"{h!r} is not a torus element centralizing x_{alpha}(1)"
                 for h in torus if h not in table or table.index(h) not in centralizing]
    generated = table.subgroup_closure([table.index(h) for h in torus if h in table])
    if not generated <= centralizing:
        witnesses.append("the subgroup generated by the torus leaves the centralizing torus")
    members = sorted(g_alpha_set(table, alpha).elements & root_subgroup(table, alpha))
    gauss = decomposer(group)
    for i in members if torus else []:
        g = table.element(i)
        form = gauss.gauss_decompose(g)
        factors = [group.x(beta, t) for params in (form.u, form.u2)
                   for beta, t in zip(system.positive_roots, params) if not t.is_zero()]
        factors += [group.x(-beta, t) for beta, t in zip(system.positive_roots, form.v) if not t.is_zero()]
        for h in torus:
            if not h.commutes_with(g):
                witnesses.append(f"{h!r} moves {table.word(i)}")
            elif not all(h.commutes_with(f) for f in factors):
                witnesses.append(f"{h!r} moves a Gauss factor of {table.word(i)}")
    if witnesses:
        logger.debug("Torus lemma at %s: %s", alpha, witnesses[0])
    return TorusLemmaReport(str(alpha), len(members), len(orthogonal), len(torus), len(generated),
                            len(centralizing), not witnesses, witnesses[:5])


# Sampled checks for groups above the enumeration cap

@dataclass
class SampledCheck:
    checked: int
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)


class SampledGroup:
    """
    Seeded stand-ins for the quantifiers of a group too large to enumerate.

    "For all x" ranges over the nontrivial root elements x_b(s) together
    with `samples` random words. E_J elements are random products of
    x_b(j), j in the radical, conjugated by random words. Per-root checks
    perturb by `trials` of them.
    """

    def __init__(self, group: ChevalleyGroup, samples: int, seed: int = 0, trials: int = 64):
        self.group = group
        self.samples = samples
        self.trials = trials
        self.rng = np.random.default_rng(seed)
        ring = group.ring
        self.root_elements = [group.x(beta, s) for beta in group.system.roots
                              for s in ring.elements() if not s.is_zero()]
        self.elements = self.root_elements + [self.random_element() for _ in range(samples)]
        self.stack = np.stack([g.matrix for g in self.elements])
        self.radical = [j for j in ring.radical() if not j.is_zero()]

    def random_element(self) -> GroupElement:
        return self.group.random_element(self.rng)

    def random_scalar(self):
        ring = self.group.ring
        return ring.from_index(int(self.rng.integers(ring.size)))

    def kernel_element(self, length: int = 6) -> GroupElement:
        """A random element of E_J; the identity over a field."""
        group = self.group
        if not self.radical:
            return group.identity()
        roots = group.system.roots
        k = group.identity()
        for _ in range(length):
            beta = roots[int(self.rng.integers(len(roots)))]
            k = k * group.x(beta, self.radical[int(self.rng.integers(len(self.radical)))])
        return k.conjugate(self.random_element())

    def commute_mask(self, g: GroupElement) -> np.ndarray:
        m = self.group.ring.modulus
        return (g.matrix @ self.stack % m == self.stack @ g.matrix % m).all(axis=(1, 2))

    def same_centralizer(self, g: GroupElement, h: GroupElement) -> bool:
        return bool(np.array_equal(self.commute_mask(g), self.commute_mask(h)))


def sampled_normal_in_kernel(sampler: SampledGroup) -> SampledCheck:
    """
    E_J is normal, and no element outside E_J has its normal closure inside E_J.

    The second half is witnessed by a root element y with [A, y] outside E_J.
    """
    group = sampler.group
    failures = []
    outside = 0
    for _ in range(sampler.samples):
        k = sampler.kernel_element()
        if not reduce_mod_radical(k.conjugate(sampler.random_element())).is_identity():
            failures.append(f"a conjugate of {k!r} leaves E_J")
        A = sampler.random_element()
        if reduce_mod_radical(A).is_identity():
            continue
        outside += 1
        if all(reduce_mod_radical(A.commutator(y)).is_identity() for y in sampler.root_elements):
            failures.append(f"the normal closure of {A!r} may lie in E_J")
        if len(failures) >= 5:
            break
    logger.info("%s: sampled E_J check on %d words, %d outside E_J", group.label, sampler.samples, outside)
    return SampledCheck(sampler.samples, failures,
                        {"kernel_conjugates": sampler.samples, "outside_e_j": outside,
                         "test_elements": len(sampler.elements)})


def sampled_sandwich(sampler: SampledGroup, alpha) -> SampledCheck:
    """
    X_alpha(R*) inside G_alpha, and elements x_alpha(t) k with k in E_J
    outside X_alpha(R) separated from x_alpha(1) by some test element.
    """
    group = sampler.group
    alpha = group.system.coerce(alpha)
    x = group.x(alpha, 1)
    x_r = {group.x(alpha, t).key for t in group.ring.elements()}
    failures = [f"x_{alpha}({u}) is not in G_alpha" for u in group.ring.units()
                if not sampler.same_centralizer(group.x(alpha, u), x)]
    separated = 0
    if sampler.radical:
        for _ in range(sampler.trials):
            g = group.x(alpha, sampler.random_scalar()) * sampler.kernel_element()
            if g.key in x_r:
                continue
            if sampler.same_centralizer(g, x):
                failures.append(f"{g!r} is not separated from x_{alpha}(1)")
                break
            separated += 1
    return SampledCheck(len(x_r), failures, {"x_r": len(x_r), "x_units": len(group.ring.units()),
                                             "separated": separated})


def sampled_root_subgroup(sampler: SampledGroup, alpha) -> SampledCheck:
    """
    Every x_alpha(t) has a witness pair (A, B) for the centralizer condition,
    and the natural pair for a perturbed x_alpha(t) k fails it.
    """
    group = sampler.group
    alpha = group.system.coerce(alpha)
    ring = group.ring
    x = group.x(alpha, 1)
    target = sampler.commute_mask(x)

    def satisfies(A: GroupElement, B: GroupElement) -> bool:
        return bool(np.array_equal(sampler.commute_mask(A) & sampler.commute_mask(B), target))

    failures = []
    for t in ring.elements():
        A, B = (group.x(alpha, t), group.identity()) if t.is_unit() else (x, group.x(alpha, t - ring.one))
        if not satisfies(A, B):
            failures.append(f"x_{alpha}({t}) has no witness pair")
    x_r = {group.x(alpha, t).key for t in ring.elements()}
    rejected = 0
    if sampler.radical:
        for _ in range(sampler.trials):
            B = group.x(alpha, sampler.random_scalar()) * sampler.kernel_element()
            if (x * B).key in x_r:
                continue
            if satisfies(x, B):
                failures.append(f"{(x * B)!r} passes the centralizer condition")
                break
            rejected += 1
    return SampledCheck(ring.size, failures, {"accepted": ring.size, "rejected": rejected})
