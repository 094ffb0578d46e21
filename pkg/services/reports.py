"""
Report builders shared by the command line and the HTTP API.
"""

import logging

from models.enums import Direction
from models.schemas import DecomposeReport, DeletionStepModel, GaussFormModel, InterpReport, RootsReport
from services.errors import GroupTooLarge
from services.gauss import decomposer
from services.group import DEFAULT_CAP, chevalley_group, enumerate_group
from services.interp import THETA_PAIRS, group_from_ring, round_trip_ring, theta_isomorphism, theta_sampled
from services.rings import make_ring, require_units
from services.roots import build_root_system

logger = logging.getLogger(__name__)


def roots_report(system_label: str, alpha_text: str) -> RootsReport:
    """
    Roots, B-set and deletion trace for alpha_1.

    Raises:
        ParseError: on a bad system label or root literal
    """
    system = build_root_system(system_label)
    alpha = system.coerce(alpha_text)
    deleted, trace = system.deletion_closure(alpha)
    return RootsReport(
        system=system.label,
        alpha=str(alpha),
        roots=[str(r) for r in system.roots],
        positive_roots=[str(r) for r in system.positive_roots],
        b_set=[str(r) for r in system.roots if r in system.b_set(alpha)],
        deletion=[DeletionStepModel(root=str(s.root), rule=s.rule, witness=str(s.witness)) for s in trace],
        covered=deleted == frozenset(system.roots) - {alpha},
    )


def decompose_report(system_label: str, ring_descriptor: str, word: str) -> DecomposeReport:
    """
    Gauss form of a generator word and its recomposition check.

    Raises:
        ParseError: on a malformed word
        NonUnitInverse: on a non-unit torus or Weyl parameter
        MissingUnit: if the ring lacks 1/2 or 1/3 for the system
    """
    system = build_root_system(system_label)
    ring = make_ring(ring_descriptor)
    require_units(ring, system)
    group = chevalley_group(system, ring)
    gauss = decomposer(group)
    g = group.parse_word(word)
    form = gauss.gauss_decompose(g)
    logger.debug("Decomposed %r into %s", word, form)
    return DecomposeReport(
        system=system.label,
        ring=ring.descriptor,
        word=word,
        form=GaussFormModel(**form.to_json()),
        big_cell=gauss.in_big_cell(g),
        recomposes=gauss.decode(form) == g,
    )


def interp_report(system_label: str, ring_descriptor: str, direction, seed: int = 0,
                  cap: int = DEFAULT_CAP, pairs: int = THETA_PAIRS) -> InterpReport:
    """
    Ring round trip, or the coded group with theta.

    A group above the cap gets theta checked on random words instead of
    the table.

    Raises:
        ValueError: on an unknown direction
    """
    direction = Direction(getattr(direction, "value", direction))
    system = build_root_system(system_label)
    ring = make_ring(ring_descriptor)
    require_units(ring, system)
    if direction is Direction.RING:
        report = round_trip_ring(system, ring)
        sampled = False
        details = report.details
    else:
        group = chevalley_group(system, ring)
        try:
            table = enumerate_group(group, cap=cap)
        except GroupTooLarge as exc:
            logger.warning("Sampling theta: %s", exc)
            table = None
        coded = group_from_ring(system, ring, table, seed=seed)
        if table is None:
            report = theta_sampled(group, pairs=pairs, seed=seed)
        else:
            report = theta_isomorphism(table, pairs=pairs, seed=seed)
        sampled = coded.sampled or not report.exhaustive
        details = dict(report.details, code_space=coded.code_space, code_classes=coded.classes)
        if coded.surjective is False:
            report.failures.append(f"codes decode onto {coded.classes} of {coded.group_order} elements")
            report.passed = False
    return InterpReport(
        instance=report.instance,
        direction=direction.value,
        exhaustive=not sampled,
        sampled=sampled,
        checked=report.checked,
        passed=report.passed,
        failures=report.failures,
        details=details,
    )
