"""
Gate-quality metrics on propagators.
"""

from typing import Optional

import numpy as np

from src.errors import InternalError
from src.models.output import GateError
from src.physics.gates import GateTarget


def project_computational(U: np.ndarray, target: GateTarget) -> np.ndarray:
    """Projected evolution B^dagger U B on the computational subspace."""
    if U.shape != (target.dim, target.dim):
        raise InternalError(f"Propagator shape {U.shape} does not match embedding dimension {target.dim}")
    B = target.embedding
    return B.conj().T @ U @ B


def trace_overlap(U_tilde: np.ndarray, target: GateTarget) -> complex:
    """Normalized overlap Tr(G^dagger U~)/4."""
    return complex(np.trace(target.matrix.conj().T @ U_tilde) / 4.0)


def leakage_per_input(U: np.ndarray, target: GateTarget) -> np.ndarray:
    """Population leaving the computational subspace for each embedded input."""
    if target.dim == 4:
        return np.zeros(4)
    B = target.embedding
    images = U @ B
    outside = images - B @ (B.conj().T @ images)
    return np.clip(np.sum(np.abs(outside) ** 2, axis=0), 0.0, 1.0)


def gate_error(
    U_tilde: np.ndarray,
    target: GateTarget,
    U_full: Optional[np.ndarray] = None,
    phase_sensitive: bool = False,
) -> GateError:
    """
    Gate error of a projected evolution.

    Args:
        U_tilde: 4x4 projected evolution
        target: Gate target
        U_full: Full propagator, needed for leakage
        phase_sensitive: Score 1 - Re Tr/4 instead of 1 - |Tr|/4

    Returns:
        GateError with epsilon clipped to [0, 1]
    """
    overlap = trace_overlap(U_tilde, target)
    raw = 1.0 - (overlap.real if phase_sensitive else abs(overlap))
    epsilon = float(np.clip(raw, 0.0, 1.0))

    leakage = leakage_per_input(U_full, target) if U_full is not None else np.zeros(0)
    return GateError(
        epsilon=epsilon,
        leakage_max=float(leakage.max()) if leakage.size else 0.0,
        leakage=[float(x) for x in leakage],
    )


def evaluate_propagator(U: np.ndarray, target: GateTarget, phase_sensitive: bool = False) -> GateError:
    """Project, then score with leakage."""
    return gate_error(project_computational(U, target), target, U_full=U, phase_sensitive=phase_sensitive)


def unitarity_deviation(U: np.ndarray) -> float:
    """max |U^dagger U - I|."""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
