"""
Result models for the Charge Qubit Gate Control Toolkit.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class TerminatedBy(str, Enum):
    """Why a Krotov run stopped."""
    TARGET_REACHED = "TargetReached"
    STALLED = "Stalled"
    MAX_ITERS = "MaxIters"


class Variant(str, Enum):
    """Which pulse a result row refers to."""
    BASELINE = "baseline"
    OPTIMIZED = "optimized"
    BASELINE_NOISELESS = "baseline_noiseless"
    OPTIMIZED_NOISELESS = "optimized_noiseless"
    FILTERED = "filtered"
    UNFILTERED = "unfiltered"
    EVALUATED = "evaluated"


class GateError(BaseModel):
    """Gate error and leakage of one propagation."""
    epsilon: float = Field(..., description="1 - |Tr(G^dagger U~)|/4", ge=0, le=1)
    leakage_max: float = Field(0.0, description="Largest leakage over the 4 inputs", ge=0, le=1)
    leakage: list[float] = Field(default_factory=list, description="Leakage per computational input")

    @property
    def fidelity(self) -> float:
        return 1.0 - self.epsilon


class NoisyErrorReport(BaseModel):
    """Monte-Carlo average of the gate error over noise realizations."""
    mean_epsilon: float
    stderr: float = Field(..., ge=0)
    M: int = Field(..., ge=1)
    epsilons: list[float]

    @model_validator(mode="after")
    def check_count(self):
        if len(self.epsilons) != self.M:
            raise ValueError(f"Expected {self.M} realization errors, got {len(self.epsilons)}")
        return self


class CutoffSweep(BaseModel):
    """Gate error versus spectral cutoff."""
    cutoffs: list[float] = Field(..., description="Angular cutoff frequencies, strictly increasing")
    errors: list[GateError]
    reference: GateError = Field(..., description="Unfiltered pulses")
    boundary_drift: list[float] = Field(default_factory=list, description="Max endpoint change per cutoff")

    @model_validator(mode="after")
    def check_axes(self):
        if len(self.cutoffs) != len(self.errors):
            raise ValueError("cutoffs and errors must have the same length")
        if any(b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ValueError("cutoffs must be strictly increasing")
        return self

    @property
    def epsilons(self) -> list[float]:
        return [e.epsilon for e in self.errors]


class PointResult(BaseModel):
    """One row of a study curve."""
    panel: str = Field(..., description="Study panel, e.g. jj_leakage")
    axis: str = Field(..., description="Swept quantity")
    axis_value: float
    variant: Variant
    epsilon: float
    stderr: Optional[float] = None
    leakage_max: Optional[float] = None
    iterations: Optional[int] = None
    terminated_by: Optional[TerminatedBy] = None
    boundary_drift: Optional[float] = None
    marked: bool = Field(False, description="Axis value highlighted by the config")
    pulse_file: Optional[str] = None


class RunRecord(BaseModel):
    """Persistent record of one scenario run."""
    artifact_version: str
    scenario: str
    seed: int
    config: dict = Field(..., description="Resolved configuration echo")
    complete: bool = True
    error: Optional[dict] = None
    points: list[PointResult] = Field(default_factory=list)
    pulse_files: list[str] = Field(default_factory=list)
    error_histories: dict[str, list[float]] = Field(default_factory=dict)
    seed_lineage: dict[str, str] = Field(default_factory=dict)
    wall_clock_s: float = 0.0


class ValidationIssue(BaseModel):
    """One problem found in a scenario file."""
    field: str = Field(..., description="Dotted field path, empty for document-level problems")
    message: str
    line: Optional[int] = Field(None, description="1-based line in the YAML file")
    column: Optional[int] = None


class ValidationReport(BaseModel):
    """Outcome of validate_config."""
    path: str
    valid: bool
    scenario: Optional[str] = None
    issues: list[ValidationIssue] = Field(default_factory=list)

    def summary(self) -> str:
        if self.valid:
            return f"{self.path}: valid {self.scenario} scenario"
        parts = []
        for issue in self.issues:
            where = f" (line {issue.line})" if issue.line is not None else ""
            parts.append(f"{issue.field or '<document>'}{where}: {issue.message}")
        return f"{self.path}: " + "; ".join(parts)
