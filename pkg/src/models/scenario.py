"""
Scenario configuration models for the Charge Qubit Gate Control Toolkit.
"""

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.system import CouplingKind, GateSign


class ScenarioKind(str, Enum):
    """Studies the harness can run."""
    JJ_LEAKAGE = "JJLeakage"
    CC_LEAKAGE = "CCLeakage"
    JJ_NOISE = "JJNoise"
    CC_NOISE = "CCNoise"
    JJ_FILTER = "JJFilter"
    CC_FILTER = "CCFilter"
    OPTIMIZE_ONLY = "OptimizeOnly"
    EVALUATE_ONLY = "EvaluateOnly"


class SweepAxis(str, Enum):
    """Quantity varied along a sweep."""
    EJ_OVER_EC = "ej_over_ec"
    EJ1_OVER_ECC = "ej1_over_ecc"
    AMPLITUDE = "amplitude"
    CUTOFF = "cutoff"
    CUTOFF_HARMONICS = "cutoff_harmonics"


class Functional(str, Enum):
    """Terminal condition of the Krotov backward pass."""
    TRACE_GLOBAL_PHASE = "TraceGlobalPhase"
    PER_STATE = "PerState"


class PulseShape(str, Enum):
    """Update weight profile s(t)."""
    SIN2 = "sin2"
    FLAT_TOP = "flat_top"


class PulseSource(str, Enum):
    """Where EvaluateOnly takes its pulses from."""
    BASELINE = "baseline"
    PULSE_FILE = "pulse_file"
    IDEAL = "ideal"


# Scenarios and the sweep axes they accept
SCENARIO_AXES = {
    ScenarioKind.JJ_LEAKAGE: (SweepAxis.EJ_OVER_EC,),
    ScenarioKind.CC_LEAKAGE: (SweepAxis.EJ1_OVER_ECC,),
    ScenarioKind.JJ_NOISE: (SweepAxis.AMPLITUDE,),
    ScenarioKind.CC_NOISE: (SweepAxis.AMPLITUDE,),
    ScenarioKind.JJ_FILTER: (SweepAxis.CUTOFF, SweepAxis.CUTOFF_HARMONICS),
    ScenarioKind.CC_FILTER: (SweepAxis.CUTOFF, SweepAxis.CUTOFF_HARMONICS),
}

JOSEPHSON_SCENARIOS = {ScenarioKind.JJ_LEAKAGE, ScenarioKind.JJ_NOISE, ScenarioKind.JJ_FILTER}
CAPACITIVE_SCENARIOS = {ScenarioKind.CC_LEAKAGE, ScenarioKind.CC_NOISE, ScenarioKind.CC_FILTER}
NOISE_SCENARIOS = {ScenarioKind.JJ_NOISE, ScenarioKind.CC_NOISE}


class StrictModel(BaseModel):
    """Base for config sections: unknown keys are errors."""
    model_config = ConfigDict(extra="forbid", use_enum_values=False)


class QubitSettings(StrictModel):
    """One Cooper pair box at idle."""
    E_C: float = Field(..., description="Charging energy", gt=0)
    E_J_idle: float = Field(..., description="Josephson energy at idle", ge=0)
    n_g_idle: float = Field(..., description="Offset charge at idle", ge=0, le=1)


class CouplingSettings(StrictModel):
    """Inter-qubit coupling."""
    kind: CouplingKind = Field(..., description="capacitive or josephson")
    E_cc: float = Field(0.0, description="Coulomb coupling (residual for josephson)", ge=0)
    E_JJ_idle: float = Field(0.0, description="Coupling junction energy at idle", ge=0)
    residual_ratio: Optional[float] = Field(
        None, description="E_cc / E_JJ kept fixed along josephson sweeps", ge=0
    )

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == CouplingKind.CAPACITIVE and self.E_JJ_idle != 0.0:
            raise ValueError("E_JJ_idle must be 0 for capacitive coupling")
        return self


class SystemSettings(StrictModel):
    """Charge window, qubits and coupling."""
    charge_window: tuple[int, int] = Field((-1, 2), description="n_min, n_max per qubit")
    qubit1: QubitSettings
    qubit2: QubitSettings
    coupling: CouplingSettings
    gate_sign: GateSign = Field(GateSign.PLUS, description="Sign of the i entries of G_JJ")

    @field_validator("charge_window")
    @classmethod
    def check_window(cls, window):
        n_min, n_max = window
        if not (n_min <= 0 and n_max >= 1):
            raise ValueError(f"charge_window {list(window)} must contain the states 0 and 1")
        return window


class GridSettings(StrictModel):
    """Piecewise-constant time grid."""
    n_steps: int = Field(1000, description="Number of segments", ge=2)
    tau: Optional[float] = Field(None, description="Gate time; default is the scheme's analytic time", gt=0)
    convergence_tolerance: Optional[float] = Field(
        None, description="Double n_steps for baselines until successive errors agree", gt=0
    )
    max_doublings: int = Field(3, ge=0)


class KrotovConfig(StrictModel):
    """Krotov optimizer settings."""
    lambda0: float = Field(100.0, description="Update weight scale", gt=0)
    shape: PulseShape = Field(PulseShape.SIN2, description="Endpoint-pinning profile")
    ramp_fraction: float = Field(0.1, description="Ramp share of tau for flat_top", gt=0, le=0.5)
    max_iters: int = Field(500, ge=0)
    target_error: float = Field(1e-4, gt=0, lt=1)
    stall_tolerance: float = Field(1e-10, ge=0)
    stall_window: int = Field(50, ge=1)
    functional: Functional = Field(Functional.TRACE_GLOBAL_PHASE)
    warm_start: Optional[str] = Field(None, description="Pulse file used as initial guess")
    guess_spread: Optional[float] = Field(
        None, description="Relative size of a seeded smooth variation of the analytic guess", gt=0, lt=1
    )


class NoiseSettings(StrictModel):
    """1/f noise section of a scenario; rates default to 0.1/tau and 10/tau."""
    A: float = Field(1e-5, description="Spectral amplitude of S(w) = A/w", ge=0)
    gamma_min: Optional[float] = Field(None, gt=0)
    gamma_max: Optional[float] = Field(None, gt=0)
    n_fluctuators: int = Field(1000, ge=1)
    realizations: int = Field(100, ge=1)

    @model_validator(mode="after")
    def check_window(self):
        if self.gamma_min is not None and self.gamma_max is not None and self.gamma_min >= self.gamma_max:
            raise ValueError(
                f"gamma_min ({self.gamma_min}) must be smaller than gamma_max ({self.gamma_max})"
            )
        return self


class NoiseConfig(BaseModel):
    """Fully resolved noise environment."""
    A: float = Field(..., ge=0)
    gamma_min: float = Field(..., gt=0)
    gamma_max: float = Field(..., gt=0)
    n_fluctuators: int = Field(..., ge=1)
    seed: int = Field(..., ge=0, lt=2**64)
    realizations: int = Field(100, ge=1)

    @model_validator(mode="after")
    def check_window(self):
        if self.gamma_min >= self.gamma_max:
            raise ValueError(
                f"gamma_min ({self.gamma_min}) must be smaller than gamma_max ({self.gamma_max})"
            )
        return self


class SweepSettings(StrictModel):
    """Sweep axis and its values."""
    axis: SweepAxis
    values: list[float] = Field(..., min_length=1)
    mark: Optional[float] = Field(None, description="Highlighted axis value, e.g. the experimental point")


class EvaluateSettings(StrictModel):
    """Pulse source for EvaluateOnly."""
    source: PulseSource = Field(PulseSource.BASELINE)
    pulse_file: Optional[str] = None

    @model_validator(mode="after")
    def check_file(self):
        if self.source == PulseSource.PULSE_FILE and not self.pulse_file:
            raise ValueError("pulse_file is required when source is pulse_file")
        return self


class EvaluationSettings(StrictModel):
    """How gate errors are scored."""
    phase_sensitive: bool = Field(False, description="Use 1 - Re Tr(G^dagger U)/4")


class ScenarioConfig(StrictModel):
    """A complete, self-describing study."""
    schema_version: Literal[1] = 1
    scenario: ScenarioKind
    seed: int = Field(..., description="Root seed of all random streams", ge=0, lt=2**64)
    system: SystemSettings
    grid: GridSettings = Field(default_factory=GridSettings)
    krotov: KrotovConfig = Field(default_factory=KrotovConfig)
    noise: Optional[NoiseSettings] = None
    sweep: Optional[SweepSettings] = None
    evaluate: Optional[EvaluateSettings] = None
    evaluation: EvaluationSettings = Field(default_factory=EvaluationSettings)

    @model_validator(mode="after")
    def check_sections(self):
        kind = self.scenario
        coupling = self.system.coupling.kind
        if kind in JOSEPHSON_SCENARIOS and coupling != CouplingKind.JOSEPHSON:
            raise ValueError(f"{kind.value} requires josephson coupling")
        if kind in CAPACITIVE_SCENARIOS and coupling != CouplingKind.CAPACITIVE:
            raise ValueError(f"{kind.value} requires capacitive coupling")
        if kind in SCENARIO_AXES:
            if self.sweep is None:
                raise ValueError(f"{kind.value} requires a sweep section")
            if self.sweep.axis not in SCENARIO_AXES[kind]:
                allowed = ", ".join(a.value for a in SCENARIO_AXES[kind])
                raise ValueError(f"sweep.axis {self.sweep.axis.value} not valid for {kind.value} (use {allowed})")
            if self.sweep.axis in (SweepAxis.CUTOFF, SweepAxis.CUTOFF_HARMONICS):
                values = self.sweep.values
                if any(b <= a for a, b in zip(values, values[1:])) or values[0] < 0:
                    raise ValueError("sweep.values for a cutoff sweep must be non-negative and strictly increasing")
        if kind in NOISE_SCENARIOS and self.noise is None:
            raise ValueError(f"{kind.value} requires a noise section")
        return self

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "schema_version": 1,
                "scenario": "OptimizeOnly",
                "seed": 1234,
                "system": {
                    "charge_window": [-1, 2],
                    "qubit1": {"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
                    "qubit2": {"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
                    "coupling": {"kind": "josephson", "E_cc": 0.0025, "E_JJ_idle": 0.05, "residual_ratio": 0.05},
                },
                "grid": {"n_steps": 1000},
                "krotov": {"lambda0": 200.0, "max_iters": 500},
            }
        },
    )
