# Models Module
from src.models.system import (
    CONTROL_ORDER,
    ChargeBasis,
    ControlId,
    CouplingKind,
    CouplingSpec,
    GateKind,
    GateSign,
    QubitParams,
    SystemParams,
)
from src.models.scenario import (
    Functional,
    KrotovConfig,
    NoiseConfig,
    PulseShape,
    ScenarioConfig,
    ScenarioKind,
    SweepAxis,
)
from src.models.output import (
    CutoffSweep,
    GateError,
    NoisyErrorReport,
    PointResult,
    RunRecord,
    TerminatedBy,
    ValidationReport,
    Variant,
)

__all__ = [
    "CONTROL_ORDER",
    "ChargeBasis",
    "ControlId",
    "CouplingKind",
    "CouplingSpec",
    "GateKind",
    "GateSign",
    "QubitParams",
    "SystemParams",
    "Functional",
    "KrotovConfig",
    "NoiseConfig",
    "PulseShape",
    "ScenarioConfig",
    "ScenarioKind",
    "SweepAxis",
    "CutoffSweep",
    "GateError",
    "NoisyErrorReport",
    "PointResult",
    "RunRecord",
    "TerminatedBy",
    "ValidationReport",
    "Variant",
]
