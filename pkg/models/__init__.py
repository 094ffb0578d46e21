"""Models package for the Chevalley kernel."""

from .enums import Direction, RingKind, RootFamily, Suite
from .schemas import (
    SCHEMA_VERSION,
    CheckReport,
    DecomposeReport,
    DecomposeRequest,
    DeletionStepModel,
    GaussFormModel,
    InterpReport,
    InterpRequest,
    RootsReport,
    RunConfig,
    SuiteResult,
)

__all__ = [
    "Direction",
    "RingKind",
    "RootFamily",
    "Suite",
    "SCHEMA_VERSION",
    "CheckReport",
    "DecomposeReport",
    "DecomposeRequest",
    "DeletionStepModel",
    "GaussFormModel",
    "InterpReport",
    "InterpRequest",
    "RootsReport",
    "RunConfig",
    "SuiteResult",
]
