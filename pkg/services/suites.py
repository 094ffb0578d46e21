"""
Verification suites for the `check` command.

Each suite is a function Instance -> SuiteResult, looked up through a
dispatch dict keyed by Suite.
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from models.enums import Suite
from models.schemas import CheckReport, RunConfig, SuiteResult
from services.definability import (
    SampledCheck,
    SampledGroup,
    check_normal_in_kernel,
    check_sandwich,
    check_torus_lemma,
    check_weyl_equivariance,
    congruence_kernel,
    e_j_by_formula,
    find_M_N,
    phi_set,
    root_subgroup_definable,
    sampled_normal_in_kernel,
    sampled_root_subgroup,
    sampled_sandwich,
)
from services.errors import ChevalleyError, GroupTooLarge
from services.gauss import decomposer
from services.group import (
    ChevalleyGroup,
    FiniteGroupTable,
    apply_ring_automorphism,
    check_additivity,
    check_commutant,
    check_commutator_formula,
    check_torus_relation,
    chevalley_group,
    elementary_order,
    enumerate_group,
    sl2_identity_check,
)
from services.interp import (
    THETA_PAIRS,
    ParameterTuple,
    find_isomorphism,
    gauss_forms,
    group_from_ring,
    interpreted_ring_for,
    parameter_report,
    round_trip_ring,
    theta_isomorphism,
    theta_sampled,
)
from services.rings import make_ring, require_units
from services.roots import build_root_system

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped (capped)"

# Rings up to this order get every parameter pair in the relation suites.
EXHAUSTIVE_RING_ORDER = 32
BIG_CELL_LIMIT = 2_000_000
THETA_ALL_PAIRS = 200_000
SAMPLED_POOL = 200
SIGN_CONVENTION = "N_{a,b} = +(p+1) on extraspecial pairs"


class Instance:
    """A (system, ring) pair with its lazily enumerated group."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.system = build_root_system(config.system)
        self.ring = make_ring(config.ring)
        require_units(self.ring, self.system)
        self.group: ChevalleyGroup = chevalley_group(self.system, self.ring)
        self._table: Optional[FiniteGroupTable] = None
        self._capped = False
        self._sampler: Optional[SampledGroup] = None

    @property
    def table(self) -> FiniteGroupTable:
        """
        Raises:
            GroupTooLarge: if the group exceeds the configured cap
        """
        if self._capped:
            raise GroupTooLarge(f"{self.group.label} exceeds the enumeration cap {self.config.cap}")
        if self._table is None:
            try:
                self._table = enumerate_group(self.group, cap=self.config.cap)
            except GroupTooLarge:
                self._capped = True
                raise
        return self._table

    @property
    def capped(self) -> bool:
        try:
            self.table
        except GroupTooLarge:
            return True
        return False

    def sampler(self) -> SampledGroup:
        """Random test elements standing in for the group when it is capped."""
        if self._sampler is None:
            self._sampler = SampledGroup(self.group, min(self.config.samples, SAMPLED_POOL), self.config.seed)
        return self._sampler

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.config.seed)

    def parameter_pairs(self):
        elements = self.ring.elements()
        if self.ring.size <= EXHAUSTIVE_RING_ORDER:
            return list(itertools.product(elements, repeat=2)), True
        rng = self.rng()
        picks = rng.integers(self.ring.size, size=(self.config.samples, 2))
        return [(self.ring.from_index(int(a)), self.ring.from_index(int(b))) for a, b in picks], False


def _result(suite: Suite, failures: List[str], **kwargs) -> SuiteResult:
    return SuiteResult(suite=suite.value, status=FAIL if failures else PASS, failures=failures, **kwargs)


def run_deletion(instance: Instance) -> SuiteResult:
    system = instance.system
    failures = []
    b_sizes = {}
    for alpha in system.roots:
        deleted, _ = system.deletion_closure(alpha)
        b_sizes[str(alpha)] = len(system.b_set(alpha))
        if deleted != frozenset(system.roots) - {alpha}:
            missing = sorted(str(r) for r in set(system.roots) - deleted - {alpha})
            failures.append(f"alpha_1 = {alpha}: not deleted {missing}")
    return _result(Suite.DELETION, failures, exhaustive=True, checked=len(system.roots),
                   details={"roots": len(system.roots), "b_set_sizes": b_sizes})


def run_steinberg(instance: Instance) -> SuiteResult:
    group, ring = instance.group, instance.ring
    pairs, exhaustive = instance.parameter_pairs()
    witnesses = [
        check_additivity(group, pairs),
        check_torus_relation(group, ring.units(), ring.elements()),
        check_commutator_formula(group, pairs),
    ]
    failures = [f"{w.relation}: {w.detail}" for w in witnesses if w is not None]
    return _result(Suite.STEINBERG, failures, exhaustive=exhaustive, sampled=not exhaustive,
                   checked=len(pairs), details={"relations": ["additivity", "torus", "commutator"],
                                                    "sign_convention": SIGN_CONVENTION})


def run_sl2(instance: Instance) -> SuiteResult:
    group, ring = instance.group, instance.ring
    values = [s for s in ring.elements() if (ring.one - s).is_unit()]
    failures = [f"gamma = {gamma}, s = {s}" for gamma in instance.system.roots for s in values
                if not sl2_identity_check(group, gamma, s)]
    return _result(Suite.SL2, failures, exhaustive=True,
                   checked=len(values) * len(instance.system.roots))


def run_gauss(instance: Instance) -> SuiteResult:
    group = instance.group
    gauss = decomposer(group)
    rng = instance.rng()
    failures = []
    for _ in range(instance.config.samples):
        g = group.random_element(rng)
        form = gauss.gauss_decompose(g)
        if gauss.decode(form) != g:
            failures.append(f"recomposition of {' * '.join(str(t) for t in g.word)}")
            break
        if gauss.decode_code(gauss.encode(g)) != g:
            failures.append("decode(encode(g)) != g")
            break
    details = {"words": instance.config.samples}
    units = len(instance.ring.units()) ** instance.system.rank
    cell = instance.ring.size ** (2 * instance.system.n_positive) * units
    if cell <= BIG_CELL_LIMIT:
        distinct, total = gauss.big_cell_count()
        details.update({"big_cell_products": total, "big_cell_distinct": distinct})
        if distinct != total:
            failures.append(f"big-cell forms are not unique: {distinct} distinct of {total}")
    return _result(Suite.GAUSS, failures, sampled=True, checked=instance.config.samples, details=details)


def run_ej(instance: Instance) -> SuiteResult:
    if instance.capped:
        check = sampled_normal_in_kernel(instance.sampler())
        return _result(Suite.EJ, check.failures, sampled=True, checked=check.checked, details=check.details)
    table = instance.table
    M, N = find_M_N(table)
    defined = e_j_by_formula(table, M, N)
    kernel = congruence_kernel(table)
    failures = []
    if defined.elements != kernel:
        failures.append(f"Normal_{{M,N}} has {defined.size} elements, E_J has {len(kernel)}")
    if not check_normal_in_kernel(table, N):
        failures.append("a phi_N element has normal closure outside E_J")
    return _result(Suite.EJ, failures, exhaustive=True, checked=len(table),
                   details={"order": len(table), "M": M, "N": N, "e_j": len(kernel),
                            "phi_N_set": len(phi_set(table, N))})


def _sampled_per_root(instance: Instance, suite: Suite, check: Callable[..., SampledCheck]) -> SuiteResult:
    sampler = instance.sampler()
    failures = []
    details = {"test_elements": len(sampler.elements)}
    for alpha in instance.system.roots:
        report = check(sampler, alpha)
        failures.extend(report.failures)
        details[str(alpha)] = report.details
    return _result(suite, failures, sampled=True, checked=len(instance.system.roots), details=details)


def run_sandwich(instance: Instance) -> SuiteResult:
    if instance.capped:
        return _sampled_per_root(instance, Suite.SANDWICH, sampled_sandwich)
    table = instance.table
    details = {"order": len(table)}
    failures = []
    for alpha in instance.system.roots:
        report = check_sandwich(table, alpha)
        lemma = check_torus_lemma(table, alpha)
        details[str(alpha)] = {"x_r": report.x_r, "middle": report.middle, "x_units": report.x_units,
                               "torus_lemma": lemma.holds}
        if not check_weyl_equivariance(table, alpha):
            failures.append(f"G_alpha is not Weyl equivariant at {alpha}")
    return _result(Suite.SANDWICH, failures, exhaustive=True, checked=len(instance.system.roots),
                   details=details)


def run_root_subgroup(instance: Instance) -> SuiteResult:
    if instance.capped:
        return _sampled_per_root(instance, Suite.ROOT_SUBGROUP, sampled_root_subgroup)
    table = instance.table
    sizes = {str(alpha): root_subgroup_definable(table, alpha).size for alpha in instance.system.roots}
    return _result(Suite.ROOT_SUBGROUP, [], exhaustive=True, checked=len(sizes),
                   details={"order": len(table), "sizes": sizes})


def run_commutant(instance: Instance) -> SuiteResult:
    report = check_commutant(instance.group, instance.config.width_cap, instance.config.cap,
                             e_table=instance.table)
    failures = [] if report.e_equals_commutant else ["E differs from [G, G]"]
    return _result(Suite.COMMUTANT, failures, exhaustive=True, checked=report.order_g,
                   details={"order_e": report.order_e, "order_g": report.order_g, "width": report.width,
                            "commutators": report.commutator_set_size})


def run_interp_ring(instance: Instance) -> SuiteResult:
    report = round_trip_ring(instance.system, instance.ring)
    return _result(Suite.INTERP_RING, report.failures, exhaustive=report.exhaustive,
                   checked=report.checked, details=report.details)


def run_interp_group(instance: Instance) -> SuiteResult:
    config = instance.config
    pairs = max(config.samples, THETA_PAIRS)
    if instance.capped:
        coded = group_from_ring(instance.system, instance.ring, samples=config.samples, seed=config.seed)
        theta = theta_sampled(instance.group, pairs=pairs, seed=config.seed)
        failures = list(theta.failures)
        order = elementary_order(instance.system, instance.ring)
        if not coded.sampled and coded.classes != order:
            failures.append(f"codes decode onto {coded.classes} elements, the group has order {order}")
        return _result(Suite.INTERP_GROUP, failures, sampled=True, checked=theta.checked,
                       details={"code_space": coded.code_space, "code_classes": coded.classes,
                                "theta_images": theta.details["images"]})
    table = instance.table
    coded = group_from_ring(instance.system, instance.ring, table, samples=config.samples, seed=config.seed)
    if len(table) ** 2 <= THETA_ALL_PAIRS:
        pairs = None
    theta = theta_isomorphism(table, pairs=pairs, seed=instance.config.seed)
    failures = list(theta.failures)
    if coded.surjective is False:
        failures.append(f"codes decode onto {coded.classes} of {coded.group_order} elements")
    return _result(Suite.INTERP_GROUP, failures, exhaustive=pairs is None and not coded.sampled,
                   sampled=pairs is not None or coded.sampled, checked=theta.checked,
                   details={"order": len(table), "code_space": coded.code_space,
                            "code_classes": coded.classes, "theta_images": theta.details["images"]})


def run_parameters(instance: Instance) -> SuiteResult:
    table = instance.table
    group, ring = instance.group, instance.ring
    forms = gauss_forms(table)
    standard = ParameterTuple.standard(group)
    failures = []
    accepted = {"standard": standard}
    if not parameter_report(table, standard, forms).accepted:
        failures.append("the standard tuple is rejected")
    rejected = 0
    for alpha in instance.system.roots:
        if parameter_report(table, standard.replace(alpha, group.identity()), forms).accepted:
            failures.append(f"corruption at {alpha} is accepted")
        else:
            rejected += 1
    if ring.degree > 1:
        accepted["frobenius"] = standard.map(lambda g: apply_ring_automorphism(g, ring.frobenius))
    if len(ring.units()) > 1:
        u = ring.units()[1]
        h = group.h(instance.system.simple_roots[0], u)
        accepted["torus_conjugate"] = standard.map(lambda g: g.conjugate(h))
    for name, candidate in accepted.items():
        if name != "standard" and not parameter_report(table, candidate, forms).accepted:
            failures.append(f"the {name} image of the standard tuple is rejected")
        elif find_isomorphism(ring, interpreted_ring_for(table, candidate)) is None:
            failures.append(f"the ring of the {name} tuple is not isomorphic to {ring.descriptor}")
    return _result(Suite.PARAMETERS, failures, exhaustive=True, checked=len(accepted) + rejected,
                   details={"order": len(table), "corruptions_rejected": rejected,
                            "accepted_tuples": sorted(accepted)})


RUNNERS: Dict[Suite, Callable[[Instance], SuiteResult]] = {
    Suite.DELETION: run_deletion,
    Suite.STEINBERG: run_steinberg,
    Suite.SL2: run_sl2,
    Suite.GAUSS: run_gauss,
    Suite.EJ: run_ej,
    Suite.SANDWICH: run_sandwich,
    Suite.ROOT_SUBGROUP: run_root_subgroup,
    Suite.COMMUTANT: run_commutant,
    Suite.INTERP_RING: run_interp_ring,
    Suite.INTERP_GROUP: run_interp_group,
    Suite.PARAMETERS: run_parameters,
}


def run_suite(instance: Instance, suite: Suite) -> SuiteResult:
    """
    Run one suite, turning capacity and bug-level errors into results.

    Usage errors (ValueError) propagate.
    """
    logger.info("Running suite %s on %s", suite.value, instance.group.label)
    try:
        result = RUNNERS[suite](instance)
    except GroupTooLarge as exc:
        logger.warning("Suite %s skipped: %s", suite.value, exc)
        return SuiteResult(suite=suite.value, status=SKIPPED, details={"reason": str(exc)})
    except ChevalleyError as exc:
        if isinstance(exc, ValueError):
            raise
        logger.error("Suite %s failed: %s: %s", suite.value, type(exc).__name__, exc)
        return SuiteResult(suite=suite.value, status=FAIL, failures=[f"{type(exc).__name__}: {exc}"])
    logger.info("Suite %s: %s", suite.value, result.status)
    return result


def run_check(config: RunConfig) -> CheckReport:
    """
    Run the configured suites.

    Raises:
        MissingUnit: if the ring lacks a unit the system needs
    """
    instance = Instance(config)
    results = [run_suite(instance, Suite(name)) for name in config.suites]
    passed = all(r.status != FAIL for r in results)
    return CheckReport(system=config.system, ring=config.ring, seed=config.seed,
                       suites=results, passed=passed)
