"""
Pydantic schemas for the Chevalley kernel reports.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.enums import Direction, Suite

SCHEMA_VERSION = 1


class RunConfig(BaseModel):
    """Configuration of a `check` run."""
    system: str = Field(..., description="Root system label, e.g. A2 or G2")
    ring: str = Field(..., description="Ring descriptor kind:q, e.g. zmod:4")
    suites: List[str] = Field(default_factory=lambda: ["all"], description="Suite names or 'all'")
    seed: int = Field(0, description="Seed for every random choice")
    cap: int = Field(2_000_000, ge=1, description="Largest group enumerated in full")
    samples: int = Field(1000, ge=1, description="Random words per sampled check")
    width_cap: int = Field(4, ge=1, description="Largest commutator width tried")
    output: Optional[str] = Field(None, description="Report path; stdout when omitted")

    @field_validator("system")
    @classmethod
    def validate_system(cls, v: str) -> str:
        from services.roots import build_root_system

        return build_root_system(v).label

    @field_validator("ring")
    @classmethod
    def validate_ring(cls, v: str) -> str:
        from services.rings import make_ring

        return make_ring(v).descriptor

    @field_validator("suites")
    @classmethod
    def validate_suites(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("At least one suite is required")
        try:
            return [suite.value for suite in Suite.expand(v)]
        except ValueError:
            valid = [s.value for s in Suite]
            unknown = [name for name in v if name != "all" and name not in valid]
            raise ValueError(f"Unknown suite(s): {unknown}. Valid suites: {valid}")


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""
    suite: str
    status: str = Field(..., description="pass, fail or skipped (capped)")
    exhaustive: bool = False
    sampled: bool = False
    checked: int = 0
    details: Dict[str, Any] = Field(default_factory=dict)
    failures: List[str] = Field(default_factory=list)


class CheckReport(BaseModel):
    """Report of a `check` run."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    system: str
    ring: str
    seed: int
    finite_ring: bool = Field(True, description="Checks run on finite stand-ins for infinite local rings")
    suites: List[SuiteResult]
    passed: bool


class DeletionStepModel(BaseModel):
    root: str
    rule: str
    witness: str


class RootsReport(BaseModel):
    """Roots, B-set and deletion trace for one choice of alpha_1."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    system: str
    alpha: str
    roots: List[str]
    positive_roots: List[str]
    b_set: List[str]
    deletion: List[DeletionStepModel]
    covered: bool = Field(..., description="Deletion reaches every root but alpha_1")


class GaussFormModel(BaseModel):
    """Parameters of u t v u' as ring literals."""
    u: List[str]
    h: List[str]
    v: List[str]
    u2: List[str]


class DecomposeRequest(BaseModel):
    system: str = Field(..., description="Root system label")
    ring: str = Field(..., description="Ring descriptor")
    word: str = Field("", description="Generator word, e.g. x[0,-1](1) * x[1,0](2)")


class DecomposeReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    system: str
    ring: str
    word: str
    form: GaussFormModel
    big_cell: bool = Field(..., description="The element lies in U T V")
    recomposes: bool = Field(..., description="u t v u' equals the input")


class InterpRequest(BaseModel):
    system: str = Field(..., description="Root system label")
    ring: str = Field(..., description="Ring descriptor")
    direction: Direction = Field(..., description="ring or group")
    seed: int = 0
    cap: int = Field(2_000_000, ge=1)
    pairs: int = Field(10_000, ge=1, description="Random pairs for the homomorphism check")


class InterpReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    instance: str
    direction: str
    exhaustive: bool
    sampled: bool
    checked: int
    passed: bool
    failures: List[str] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)
