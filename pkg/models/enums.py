"""
Enums for the Chevalley kernel.
"""

from enum import Enum
from typing import Iterable, List


class RootFamily(str, Enum):
    """Cartan-Killing families of irreducible reduced root systems."""
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"

    @property
    def description(self) -> str:
        """Get the description for this family."""
        descriptions = {
            "A": "A_l, l >= 2 (special linear type)",
            "B": "B_l, l >= 2 (odd orthogonal type, last simple root short)",
            "C": "C_l, l >= 2 (symplectic type, last simple root long)",
            "D": "D_l, l >= 4 (even orthogonal type)",
            "E": "E_6, E_7, E_8",
            "F": "F_4",
            "G": "G_2 (first simple root short)",
        }
        return descriptions.get(self.value, "No description available")

    def is_admissible(self, rank: int) -> bool:
        """Check whether (family, rank) names an irreducible system of rank >= 2."""
        if rank < 2:
            return False
        if self in (RootFamily.A, RootFamily.B, RootFamily.C):
            return True
        if self is RootFamily.D:
            return rank >= 4
        if self is RootFamily.E:
            return rank in (6, 7, 8)
        if self is RootFamily.F:
            return rank == 4
        return rank == 2

    @property
    def is_simply_laced(self) -> bool:
        return self in (RootFamily.A, RootFamily.D, RootFamily.E)

    @classmethod
    def get_all_with_descriptions(cls) -> dict:
        """Get all families with their descriptions."""
        return {
            "families": [family.value for family in cls],
            "descriptions": {family.value: family.description for family in cls}
        }


class RingKind(str, Enum):
    """Kinds of finite local rings."""
    ZMOD = "zmod"
    GF = "gf"
    DUAL = "dual"

    @property
    def description(self) -> str:
        descriptions = {
            "zmod": "Z/p^k, radical (p)",
            "gf": "Galois field GF(p^d), radical {0}",
            "dual": "dual numbers GF(q)[e]/(e^2), radical (e)",
        }
        return descriptions.get(self.value, "No description available")


class Suite(str, Enum):
    """Verification suites runnable by `check`."""
    DELETION = "deletion"
    STEINBERG = "steinberg"
    SL2 = "sl2"
    GAUSS = "gauss"
    EJ = "ej"
    SANDWICH = "sandwich"
    ROOT_SUBGROUP = "root_subgroup"
    COMMUTANT = "commutant"
    INTERP_RING = "interp_ring"
    INTERP_GROUP = "interp_group"
    PARAMETERS = "parameters"

    @property
    def description(self) -> str:
        """Get the description for this suite."""
        descriptions = {
            "deletion": "Root deletion closure covers every root but alpha_1, for every alpha_1",
            "steinberg": "One-parameter additivity, torus relation and Chevalley commutator formula",
            "sl2": "The SL_2 identity for every root and every s with 1-s a unit",
            "gauss": "Gauss decomposition round trip on seeded random words, big-cell uniqueness",
            "ej": "Normal_{M,N} defines the congruence kernel E_J",
            "sandwich": "X(R) contains X(R)E_J meet G_alpha, which contains X(R*)",
            "root_subgroup": "Root subgroups are definable with parameters",
            "commutant": "E = [G,G] and the empirical commutator width",
            "interp_ring": "Ring reconstructed inside the group is isomorphic to R",
            "interp_group": "Group coded in the ring is isomorphic to E via theta",
            "parameters": "Parameter formula accepts the true tuple and rejects corruptions",
        }
        return descriptions.get(self.value, "No description available")

    @property
    def needs_table(self) -> bool:
        """Whether the suite needs the whole group enumerated."""
        return self in (
            Suite.EJ, Suite.SANDWICH, Suite.ROOT_SUBGROUP, Suite.COMMUTANT,
            Suite.INTERP_GROUP, Suite.PARAMETERS,
        )

    @classmethod
    def expand(cls, names: Iterable[str]) -> List["Suite"]:
        """
        Resolve suite names, expanding "all" to the full registry.

        Args:
            names: Suite names as given on the command line

        Returns:
            Suites in registry order, without duplicates
        """
        wanted = set()
        for name in names:
            if name == "all":
                wanted.update(cls)
            else:
                wanted.add(cls(name))
        return [suite for suite in cls if suite in wanted]

    @classmethod
    def get_all_with_descriptions(cls) -> dict:
        return {
            "suites": [suite.value for suite in cls],
            "descriptions": {suite.value: suite.description for suite in cls}
        }


class Direction(str, Enum):
    """Round-trip direction for `interp`."""
    RING = "ring"
    GROUP = "group"
