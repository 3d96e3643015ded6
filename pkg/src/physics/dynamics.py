"""
Exact propagation of piecewise-constant pulses.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from src.config import tolerance
from src.errors import ConfigurationError, InputError, NumericalError
from src.models.system import CONTROL_INDEX, CONTROL_ORDER, ControlId
from src.physics.hamiltonian import HermitianOperator, SystemModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimeGrid:
    """tau split into n_steps equal segments; sample j holds on [j dt, (j+1) dt)."""
    tau: float
    n_steps: int

    def __post_init__(self):
        if self.n_steps < 2:
            raise ConfigurationError(f"n_steps must be at least 2, got {self.n_steps}")
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")

    @property
    def dt(self) -> float:
        return self.tau / self.n_steps

    @property
    def t_start(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt

    @property
    def t_mid(self) -> np.ndarray:
        return (np.arange(self.n_steps) + 0.5) * self.dt

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(tau=self.tau, n_steps=self.n_steps * factor)


@dataclass
class PulseSet:
    """Piecewise-constant control fields on a common grid."""
    grid: TimeGrid
    fields: dict[ControlId, np.ndarray]

    def __post_init__(self):
        fields = {}
        for cid in CONTROL_ORDER:
            if cid not in self.fields:
                continue
            samples = np.array(self.fields[cid], dtype=float)
            if samples.shape != (self.grid.n_steps,):
                raise InputError(
                    f"Field {cid.value} has {samples.size} samples, grid has {self.grid.n_steps}"
                )
            if cid.is_josephson and np.any(samples < 0):
                raise InputError(f"Josephson field {cid.value} has negative samples")
            fields[cid] = samples
        unknown = set(self.fields) - set(fields)
        if unknown:
            raise InputError(f"Unknown control ids: {sorted(str(u) for u in unknown)}")
        self.fields = fields

    @property
    def controls(self) -> list[ControlId]:
        return list(self.fields)

    def values_matrix(self, base: np.ndarray) -> np.ndarray:
        """(n_steps, 5) control values; columns without a field take the base value."""
        values = np.tile(np.asarray(base, dtype=float), (self.grid.n_steps, 1))
        for cid, samples in self.fields.items():
            values[:, CONTROL_INDEX[cid]] = samples
        return values

    def copy(self) -> "PulseSet":
        return PulseSet(grid=self.grid, fields={cid: s.copy() for cid, s in self.fields.items()})

    def with_fields(self, updates: dict[ControlId, np.ndarray]) -> "PulseSet":
        fields = {cid: s.copy() for cid, s in self.fields.items()}
        fields.update(updates)
        return PulseSet(grid=self.grid, fields=fields)

    @classmethod
    def constant(cls, grid: TimeGrid, values: dict[ControlId, float]) -> "PulseSet":
        return cls(grid=grid, fields={cid: np.full(grid.n_steps, float(v)) for cid, v in values.items()})


@dataclass
class Propagator:
    """Full-space evolution operator, optionally with the per-segment factors."""
    U: np.ndarray
    steps: Optional[list[np.ndarray]] = field(default=None, repr=False)


# ==================== Exponentials ====================

def eig_hermitian(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a Hermitian matrix."""
    try:
        w, V = linalg.eigh(H, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        norm = np.max(np.abs(H)) if np.all(np.isfinite(H)) else float("nan")
        raise NumericalError(f"Eigensolver failed (dim={H.shape[0]}, max|H|={norm:.3g}): {exc}") from exc
    return w, V


def exponential_from_eig(w: np.ndarray, V: np.ndarray, dt: float) -> np.ndarray:
    """V diag(exp(-i w dt)) V^dagger."""
    return (V * np.exp(-1j * w * dt)) @ V.conj().T


def step_exponential(H: HermitianOperator | np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H dt) through the eigendecomposition of H."""
    matrix = H.entries if isinstance(H, HermitianOperator) else np.asarray(H, dtype=complex)
    w, V = eig_hermitian(matrix)
    return exponential_from_eig(w, V, dt)


def divided_differences(w: np.ndarray, dt: float) -> np.ndarray:
    """
    (exp(-i w_a dt) - exp(-i w_b dt)) / (w_a - w_b), with -i dt exp(-i w_a dt) on ties.

    Written with sinc so that (near-)degenerate pairs stay accurate.
    """
    wa = w[:, None]
    wb = w[None, :]
    return -1j * dt * np.exp(-0.5j * (wa + wb) * dt) * np.sinc((wa - wb) * dt / (2.0 * np.pi))


def exponential_derivative(
    w: np.ndarray, V: np.ndarray, dH: np.ndarray, dt: float
) -> np.ndarray:
    """Exact derivative of exp(-i H dt) along dH, given the eigendecomposition of H."""
    phi = divided_differences(w, dt)
    return V @ ((V.conj().T @ dH @ V) * phi) @ V.conj().T


# ==================== Propagation ====================

def check_values(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise InputError(
            f"Non-finite sample in field {CONTROL_ORDER[bad[1]].value} at segment {bad[0]}"
        )


def propagate_values(
    values: np.ndarray,
    system: SystemModel,
    dt: float,
    keep_steps: bool = False,
) -> Propagator:
    """Ordered product of segment exponentials for an (n_steps, 5) value array."""
    check_values(values)
    U = np.eye(system.dim, dtype=complex)
    steps = [] if keep_steps else None
    max_norm = 0.0
    for row in values:
        H = system.hamiltonian(row)
        max_norm = max(max_norm, float(np.max(np.abs(H))))
        step = step_exponential(H, dt)
        U = step @ U
        if keep_steps:
            steps.append(step)

    if dt * max_norm > tolerance("warnings", "dt_norm"):
        logger.debug("dt*||H|| = %.3g exceeds the recommended step bound", dt * max_norm)
    return Propagator(U=U, steps=steps)


def propagate(
    pulses: PulseSet,
    system: SystemModel,
    keep_steps: bool = False,
    offsets: Optional[np.ndarray] = None,
) -> Propagator:
    """
    Evolution operator U = U_N ... U_1 for a pulse set.

    Args:
        pulses: Control fields; missing controls stay at the system's idle values
        system: Precomputed Hamiltonian pieces
        keep_steps: Retain every segment exponential
        offsets: Optional (n_steps, 5) additive shifts, e.g. gate-charge noise

    Returns:
        Propagator over the whole grid
    """
    values = pulses.values_matrix(system.idle_values())
    if offsets is not None:
        values = values + offsets
    return propagate_values(values, system, pulses.grid.dt, keep_steps=keep_steps)


def warn_if_coarse(pulses: PulseSet, system: SystemModel) -> bool:
    """
    Log a warning when dt times the driven part of H exceeds the recommended bound.

    The driven part is H without the idle charging diagonal (see
    SystemModel.driven_norm), taken at every segment. Returns True if it warned.
    """
    values = pulses.values_matrix(system.idle_values())
    ratio = pulses.grid.dt * max(system.driven_norm(row) for row in values)
    bound = tolerance("warnings", "dt_norm")
    if ratio > bound:
        logger.warning(
            "dt*||H driven|| = %.3g exceeds %.3g; the pulse resolution is coarse",
            ratio, bound,
        )
        return True
    return False
