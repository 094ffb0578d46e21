"""
Exception hierarchy for the Chevalley kernel.

Errors that describe bad input also derive from ValueError so the API layer
can map them to HTTP 400 and the CLI to exit code 2.
"""


class ChevalleyError(Exception):
    """Base class for every error raised by the kernel."""


# Usage errors

class RankTooSmall(ChevalleyError, ValueError):
    """The (family, rank) pair does not name an irreducible system of rank >= 2."""


class NotPrime(ChevalleyError, ValueError):
    """A ring descriptor does not name a prime or a prime power."""


class NoIrreducible(ChevalleyError, ValueError):
    """No monic irreducible polynomial of the requested degree was found."""


class ParseError(ChevalleyError, ValueError):
    """A root literal, ring literal or generator word could not be parsed."""


class RingMismatch(ChevalleyError, ValueError):
    """Operands belong to different rings or groups."""


class ProportionalRoots(ChevalleyError, ValueError):
    """A root string was requested for beta = +-alpha."""


class NonUnitInverse(ChevalleyError, ValueError):
    """An inverse of a non-unit was requested (torus or Weyl parameter, division)."""


NonUnitTorusParameter = NonUnitInverse


class MissingUnit(ChevalleyError, ValueError):
    """The ring lacks 1/2 or 1/3 required by the root system."""


# Capacity errors

class GroupTooLarge(ChevalleyError):
    """Closure enumeration exceeded the configured cap."""


class WidthCapExceeded(ChevalleyError):
    """Commutator products up to the width cap do not cover the group."""


class NotFound(ChevalleyError):
    """A search over bounded parameters found nothing."""


# Structural outcomes

class NotInBigCell(ChevalleyError):
    """The element admits no factorisation u t v."""


# Internal consistency failures: any of these signals a bug

class SignInconsistency(ChevalleyError):
    pass


class NonIntegralEntry(ChevalleyError):
    pass


class DecompositionFailed(ChevalleyError):
    pass


class NotASubgroup(ChevalleyError):
    pass


class InclusionViolated(ChevalleyError):
    pass


class MismatchWithRootSubgroup(ChevalleyError):
    pass


class IsomorphismFailure(ChevalleyError):
    pass


class NoA2Subsystem(ChevalleyError):
    pass
