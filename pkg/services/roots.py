"""
Root systems of the irreducible reduced types and the combinatorics used in
the root-subgroup definability argument: the set B and the deletion closure.

Roots are integer coefficient vectors over the simple roots. The inner
product comes from the symmetrised Cartan matrix, so all arithmetic is exact.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import numpy as np

from models.enums import RootFamily
from services.errors import ParseError, ProportionalRoots, RankTooSmall

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Root:
    """A root written over the simple-root basis."""
    coeffs: Tuple[int, ...]

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Root") -> "Root":
        return Root(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Root":
        return Root(tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "Root":
        return Root(tuple(k * a for a in self.coeffs))

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return self.height > 0

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


@dataclass(frozen=True)
class DeletionStep:
    """One line of the deletion trace: which rule removed `root` and the witness."""
    root: Root
    rule: str
    witness: Root


def parse_system(label: str) -> Tuple[RootFamily, int]:
    """
    Parse a system label such as "A2" or "g2".

    Args:
        label: Family letter followed by the rank

    Returns:
        (family, rank)
    """
    match = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", label or "")
    if not match:
        raise ParseError(f"Invalid root system label: {label!r}")
    return RootFamily(match.group(1).upper()), int(match.group(2))


def parse_root(text: str, rank: int) -> Root:
    """Parse a root literal like "[1,0]" or "[-3,-2]"."""
    match = re.fullmatch(r"\s*\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]\s*", text or "")
    if not match:
        raise ParseError(f"Invalid root literal: {text!r}")
    coeffs = tuple(int(c) for c in match.group(1).split(","))
    if len(coeffs) != rank:
        raise ParseError(f"Root literal {text!r} has {len(coeffs)} coefficients, expected {rank}")
    return Root(coeffs)


def dynkin_to_cartan(family: RootFamily, rank: int) -> np.ndarray:
    """
    Cartan matrix of a Dynkin diagram, A[i, j] = 2(a_i, a_j)/(a_i, a_i).

    Simple roots are numbered so that B_l has its last root short, C_l its
    last root long, F_4 has a_1, a_2 long, and G_2 has a_1 short.
    """
    A = 2 * np.eye(rank, dtype=np.int64)
    if family is RootFamily.A:
        A[range(rank - 1), range(1, rank)] = -1
        A[range(1, rank), range(rank - 1)] = -1
    elif family in (RootFamily.B, RootFamily.C, RootFamily.D, RootFamily.E):
        A[range(rank - 2), range(1, rank - 1)] = -1
        A[range(1, rank - 1), range(rank - 2)] = -1
        if family is RootFamily.B:
            # last root shorter
            A[-2, -1] = -1
            A[-1, -2] = -2
        elif family is RootFamily.C:
            # last root longer
            A[-2, -1] = -2
            A[-1, -2] = -1
        elif family is RootFamily.D:
            A[-3, -1] = -1
            A[-1, -3] = -1
        else:
            A[-4, -1] = -1
            A[-1, -4] = -1
    elif family is RootFamily.F:
        A[0, 1] = A[1, 0] = -1
        A[1, 2] = -1
        A[2, 1] = -2
        A[2, 3] = A[3, 2] = -1
    elif family is RootFamily.G:
        A[0, 1] = -3
        A[1, 0] = -1
    return A


def _symmetrize(cartan: np.ndarray) -> np.ndarray:
    """Gram matrix (a_i, a_j) with short roots of squared length 2."""
    rank = cartan.shape[0]
    half_norms: Dict[int, float] = {0: 1.0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(rank):
            if j != i and cartan[i, j] != 0 and j not in half_norms:
                half_norms[j] = half_norms[i] * cartan[i, j] / cartan[j, i]
                stack.append(j)
    smallest = min(half_norms.values())
    d = np.array([round(half_norms[i] / smallest) for i in range(rank)], dtype=np.int64)
    return d[:, None] * cartan


class RootSystem:
    """
    An irreducible reduced root system of rank >= 2.

    Positive roots are ordered by height; ties are broken by the coefficient
    vector in decreasing lexicographic order, so the simple roots come first
    in their natural numbering and the highest root comes last. The full
    root list is the positive roots followed by their negatives in the same
    order.
    """

    def __init__(self, family: RootFamily, rank: int):
        self.family = family
        self.rank = rank
        self.label = f"{family.value}{rank}"
        self.cartan = dynkin_to_cartan(family, rank)
        self.gram = _symmetrize(self.cartan)
        self.simple_roots: List[Root] = [
            Root(tuple(1 if k == i else 0 for k in range(rank))) for i in range(rank)
        ]
        found = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            fresh = []
            for beta in frontier:
                for alpha in self.simple_roots:
                    image = self.reflect(beta, alpha)
                    if image not in found:
                        found.add(image)
                        fresh.append(image)
            frontier = fresh
        self.positive_roots: List[Root] = sorted(
            (r for r in found if r.is_positive),
            key=lambda r: (r.height, tuple(-c for c in r.coeffs)),
        )
        self.roots: List[Root] = self.positive_roots + [-r for r in self.positive_roots]
        self._index: Dict[Root, int] = {r: i for i, r in enumerate(self.roots)}
        self.max_norm = max(self.norm(r) for r in self.simple_roots)
        logger.debug("Built %s with %d roots", self.label, len(self.roots))

    # Basic geometry

    def inner(self, a: Root, b: Root) -> int:
        return int(np.asarray(a.coeffs) @ self.gram @ np.asarray(b.coeffs))

    def norm(self, a: Root) -> int:
        return self.inner(a, a)

    def pairing(self, beta: Root, alpha: Root) -> int:
        """<beta, alpha> = 2(beta, alpha)/(alpha, alpha)."""
        numerator = 2 * self.inner(beta, alpha)
        denominator = self.norm(alpha)
        if numerator % denominator:
            raise ValueError(f"Non-integral pairing <{beta}, {alpha}>")
        return numerator // denominator

    def reflect(self, beta: Root, alpha: Root) -> Root:
        return beta - alpha.scale(self.pairing(beta, alpha))

    def is_root(self, vector: Root) -> bool:
        return vector in self._index

    def index(self, root: Root) -> int:
        return self._index[root]

    def is_long(self, root: Root) -> bool:
        return self.norm(root) == self.max_norm

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def coroot_coeffs(self, alpha: Root) -> Tuple[int, ...]:
        """Coefficients of the coroot of alpha over the simple coroots."""
        norm = self.norm(alpha)
        coeffs = []
        for a_i, simple in zip(alpha.coeffs, self.simple_roots):
            value = a_i * self.norm(simple)
            if value % norm:
                raise ValueError(f"Non-integral coroot for {alpha}")
            coeffs.append(value // norm)
        return tuple(coeffs)

    def coerce(self, root: Union[Root, str, Iterable[int]]) -> Root:
        """Accept a Root, a literal, or a coefficient sequence; check membership."""
        if isinstance(root, str):
            root = parse_root(root, self.rank)
        elif not isinstance(root, Root):
            root = Root(tuple(int(c) for c in root))
        if not self.is_root(root):
            raise ParseError(f"{root} is not a root of {self.label}")
        return root

    # Combinatorics

    def root_string(self, alpha: Root, beta: Root) -> Tuple[int, int]:
        """
        Length of the alpha-string through beta.

        Returns:
            (p, q) with p = max{i : beta - i alpha in Phi}, q = max{i : beta + i alpha in Phi}
        """
        if beta == alpha or beta == -alpha:
            raise ProportionalRoots(f"{beta} is proportional to {alpha}")
        p = 0
        while self.is_root(beta - alpha.scale(p + 1)):
            p += 1
        q = 0
        while self.is_root(beta + alpha.scale(q + 1)):
            q += 1
        return p, q

    def b_set(self, alpha1: Root) -> FrozenSet[Root]:
        """
        B = {beta : alpha1 + beta not in Phi and not zero}.

        B always contains alpha1 itself; x_beta(t) for beta in B commutes
        with x_alpha1(1).
        """
        return frozenset(
            beta for beta in self.roots
            if not (alpha1 + beta).is_zero and not self.is_root(alpha1 + beta)
        )

    def deletion_closure(self, alpha1: Root) -> Tuple[FrozenSet[Root], List[DeletionStep]]:
        """
        Delete roots whose unipotent parts are forced to vanish.

        Rule "B" runs first over every root: gamma goes if beta + gamma is a
        root or zero for some beta in B. Rule "torus" then takes the roots
        still standing, other than alpha1: gamma goes if some delta orthogonal
        to alpha1 has pairing(delta, gamma) = 2(delta, gamma)/(gamma, gamma)
        odd. The witness is the first such delta in root order.

        The torus rule is purely combinatorial; using it on a group needs 1/2
        in the ring, which the group layer enforces.

        Args:
            alpha1: The root whose subgroup is being isolated

        Returns:
            (deleted roots, trace in root order). The trace has one step per
            deleted root, naming its rule and witness.
        """
        b = [beta for beta in self.roots if beta in self.b_set(alpha1)]
        orthogonal = [delta for delta in self.roots if self.inner(delta, alpha1) == 0]
        deleted = set()
        trace: List[DeletionStep] = []
        for gamma in self.roots:
            witness = next(
                (beta for beta in b if (beta + gamma).is_zero or self.is_root(beta + gamma)),
                None,
            )
            if witness is not None:
                deleted.add(gamma)
                trace.append(DeletionStep(gamma, "B", witness))
        for gamma in self.roots:
            if gamma in deleted or gamma == alpha1:
                continue
            witness = next(
                (delta for delta in orthogonal if self.pairing(delta, gamma) % 2),
                None,
            )
            if witness is not None:
                deleted.add(gamma)
                trace.append(DeletionStep(gamma, "torus", witness))
        trace.sort(key=lambda step: self.index(step.root))
        return frozenset(deleted), trace

    def a2_pair(self) -> Optional[Tuple[Root, Root]]:
        """
        First pair of positive roots spanning an A_2 subsystem.

        The pair (a, b) has equal lengths, a + b a root, a - b not a root, and
        neither 2a + b nor a + 2b a root. None for B_2 = C_2, which has no such pair.
        """
        for i, a in enumerate(self.positive_roots):
            for b in self.positive_roots[i + 1:]:
                if (self.norm(a) == self.norm(b) and self.is_root(a + b) and not self.is_root(a - b)
                        and not self.is_root(a.scale(2) + b) and not self.is_root(a + b.scale(2))):
                    return a, b
        return None

    def __repr__(self) -> str:
        return f"RootSystem({self.label})"


EXPECTED_ROOT_COUNTS = {
    RootFamily.A: lambda l: l * (l + 1),
    RootFamily.B: lambda l: 2 * l * l,
    RootFamily.C: lambda l: 2 * l * l,
    RootFamily.D: lambda l: 2 * l * (l - 1),
    RootFamily.E: lambda l: {6: 72, 7: 126, 8: 240}[l],
    RootFamily.F: lambda l: 48,
    RootFamily.G: lambda l: 12,
}


@lru_cache(maxsize=None)
def _build(family: RootFamily, rank: int) -> RootSystem:
    return RootSystem(family, rank)


def build_root_system(family: Union[RootFamily, str], rank: Optional[int] = None) -> RootSystem:
    """
    Build an irreducible root system by reflection closure of the simple roots.

    Args:
        family: Family letter, or a full label like "G2" when rank is omitted
        rank: Rank of the system

    Returns:
        The (cached) RootSystem
    """
    if rank is None:
        family, rank = parse_system(str(family))
    try:
        family = RootFamily(str(getattr(family, "value", family)).upper())
    except ValueError:
        raise ParseError(f"Unknown root system family: {family}")
    if not family.is_admissible(rank):
        raise RankTooSmall(f"{family.value}{rank} is not an irreducible system of rank >= 2")
    system = _build(family, rank)
    expected = EXPECTED_ROOT_COUNTS[family](rank)
    if len(system.roots) != expected:
        raise ValueError(f"{system.label}: built {len(system.roots)} roots, expected {expected}")
    return system
