"""
Static description of the coupled two-qubit charge system.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from src.config import tolerance
from src.errors import ConfigurationError

logger = logging.getLogger(__name__)


class CouplingKind(str, Enum):
    """How the two Cooper pair boxes are coupled."""
    CAPACITIVE = "capacitive"
    JOSEPHSON = "josephson"


class GateKind(str, Enum):
    """Target two-qubit gates."""
    G_JJ_PLUS = "G_JJ_plus"
    G_JJ_MINUS = "G_JJ_minus"
    G_CC = "G_cc"


class GateSign(str, Enum):
    """Sign of the imaginary entries of G_JJ."""
    PLUS = "plus"
    MINUS = "minus"


class ControlId(str, Enum):
    """Time-dependent parameters of the full Hamiltonian."""
    EJ1 = "EJ1"
    EJ2 = "EJ2"
    EJJ = "EJJ"
    NG1 = "NG1"
    NG2 = "NG2"

    @property
    def is_josephson(self) -> bool:
        return self in (ControlId.EJ1, ControlId.EJ2, ControlId.EJJ)


# Column order of every (n_steps, 5) control-value array
CONTROL_ORDER = (ControlId.EJ1, ControlId.EJ2, ControlId.EJJ, ControlId.NG1, ControlId.NG2)
CONTROL_INDEX = {cid: i for i, cid in enumerate(CONTROL_ORDER)}


@dataclass(frozen=True)
class ChargeBasis:
    """Truncated window of Cooper-pair numbers n_min..n_max for one qubit."""
    n_min: int = -1
    n_max: int = 2

    def __post_init__(self):
        if not (self.n_min <= 0 < 1 <= self.n_max):
            raise ConfigurationError(
                f"Charge window [{self.n_min}, {self.n_max}] must contain the states 0 and 1"
            )

    @property
    def D(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def charges(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1, dtype=float)

    def index(self, n: int) -> int:
        """Position of charge state n inside the window."""
        if not self.n_min <= n <= self.n_max:
            raise ConfigurationError(f"Charge state {n} outside window [{self.n_min}, {self.n_max}]")
        return n - self.n_min

    def product_index(self, n1: int, n2: int) -> int:
        """Position of |n1, n2> in the D^2 product basis (qubit 1 major)."""
        return self.index(n1) * self.D + self.index(n2)

    @classmethod
    def from_window(cls, window) -> "ChargeBasis":
        n_min, n_max = window
        return cls(n_min=int(n_min), n_max=int(n_max))


@dataclass(frozen=True)
class QubitParams:
    """Single Cooper pair box; E_J_idle and n_g_idle double as instantaneous values."""
    E_C: float
    E_J_idle: float
    n_g_idle: float

    def __post_init__(self):
        if not self.E_C > 0:
            raise ConfigurationError(f"E_C must be positive, got {self.E_C}")
        if self.E_J_idle < 0:
            raise ConfigurationError(f"E_J must be non-negative, got {self.E_J_idle}")
        if not 0.0 <= self.n_g_idle <= 1.0:
            raise ConfigurationError(f"n_g must lie in [0, 1], got {self.n_g_idle}")
        if self.E_J_idle / self.E_C > tolerance("warnings", "charge_regime"):
            logger.warning("E_J/E_C = %.3g is outside the charge regime", self.E_J_idle / self.E_C)

    def at(self, E_J: float | None = None, n_g: float | None = None) -> "QubitParams":
        """Copy with instantaneous Josephson energy and/or offset charge."""
        return replace(
            self,
            E_J_idle=self.E_J_idle if E_J is None else E_J,
            n_g_idle=self.n_g_idle if n_g is None else n_g,
        )


@dataclass(frozen=True)
class CouplingSpec:
    """Inter-qubit coupling; for the Josephson kind E_cc is the residual capacitive part."""
    kind: CouplingKind
    E_cc: float
    E_JJ_idle: float = 0.0

    def __post_init__(self):
        if self.E_cc < 0:
            raise ConfigurationError(f"E_cc must be non-negative, got {self.E_cc}")
        if self.E_JJ_idle < 0:
            raise ConfigurationError(f"E_JJ must be non-negative, got {self.E_JJ_idle}")
        if self.kind == CouplingKind.CAPACITIVE and self.E_JJ_idle != 0.0:
            raise ConfigurationError("Capacitive coupling cannot carry a coupling junction energy")

    def at(self, E_JJ: float | None = None) -> "CouplingSpec":
        return replace(self, E_JJ_idle=self.E_JJ_idle if E_JJ is None else E_JJ)


@dataclass(frozen=True)
class SystemParams:
    """Everything needed to build the full Hamiltonian at idle."""
    basis: ChargeBasis
    qubit1: QubitParams
    qubit2: QubitParams
    coupling: CouplingSpec

    def idle_values(self) -> np.ndarray:
        """Idle control values in CONTROL_ORDER."""
        return np.array([
            self.qubit1.E_J_idle,
            self.qubit2.E_J_idle,
            self.coupling.E_JJ_idle,
            self.qubit1.n_g_idle,
            self.qubit2.n_g_idle,
        ])
