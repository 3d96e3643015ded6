"""
Finite-difference validation of the Krotov update direction.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.config import tolerance
from src.control.krotov import ControlProblem, costate_weights, functional_from_overlaps, overlaps
from src.models.scenario import Functional
from src.models.system import CONTROL_INDEX
from src.physics.dynamics import PulseSet, divided_differences, eig_hermitian, exponential_from_eig
from src.physics.gates import GateTarget


@dataclass
class GradientReport:
    """Analytic versus central-difference derivatives of the functional."""
    segments: list[int]
    channels: list[str]
    analytic: np.ndarray
    finite_difference: np.ndarray
    step: float

    @property
    def max_relative_deviation(self) -> float:
        scale = float(np.max(np.abs(self.finite_difference)))
        if scale == 0.0:
            return float(np.max(np.abs(self.analytic)))
        return float(np.max(np.abs(self.analytic - self.finite_difference)) / scale)


def gradient_check(
    problem: ControlProblem,
    pulses: PulseSet,
    target: GateTarget,
    segments: Optional[Sequence[int]] = None,
    step: Optional[float] = None,
    functional: Functional = Functional.TRACE_GLOBAL_PHASE,
) -> GradientReport:
    """
    Compare 2 Re sum_k <chi_k|dU_j|psi_k> with central differences of the functional.

    Args:
        problem: Control problem defining the channels
        pulses: Point at which derivatives are taken
        target: Gate target
        segments: Segments to probe; default is an even spread over the grid
        step: Finite-difference step in control units
        functional: Functional whose derivative is checked

    Returns:
        GradientReport with one row per probed segment and one column per channel
    """
    grid = problem.grid
    dt = grid.dt
    n = grid.n_steps
    h = tolerance("gradient", "step") if step is None else step
    if segments is None:
        probes = int(tolerance("gradient", "probes"))
        segments = sorted(set(np.linspace(0, n - 1, probes).astype(int).tolist()))
    segments = list(segments)

    values = problem.values_matrix(pulses)
    eigs = [eig_hermitian(problem.system.hamiltonian(row)) for row in values]
    steps = [exponential_from_eig(w, V, dt) for w, V in eigs]

    # Psi_j: states entering segment j
    prefix = [target.embedding.copy()]
    for step_j in steps:
        prefix.append(step_j @ prefix[-1])
    T = target.target_states
    final = prefix[-1]

    # Y_j: targets back-propagated to the end of segment j
    suffix = [None] * n
    back = T.copy()
    for j in range(n - 1, -1, -1):
        suffix[j] = back
        back = steps[j].conj().T @ back

    # chi_k(t_{j+1}) = c_k Y_j[:, k]
    column_weights = costate_weights(T, final, functional)

    analytic = np.zeros((len(segments), len(problem.channels)))
    numeric = np.zeros_like(analytic)
    for row_idx, j in enumerate(segments):
        w, V = eigs[j]
        phi = divided_differences(w, dt)
        Vh = V.conj().T
        chi_next = suffix[j] * column_weights[None, :]
        for col, channel in enumerate(problem.channels):
            dH = problem.derivative(channel, values[j])
            M = (Vh @ dH @ V) * phi
            coupling = np.real(np.sum((Vh @ chi_next).conj() * (M @ (Vh @ prefix[j]))))
            analytic[row_idx, col] = 2.0 * coupling

            probes = []
            for sign in (1.0, -1.0):
                shifted = values[j].copy()
                for cid in channel.targets:
                    shifted[CONTROL_INDEX[cid]] += sign * h
                w_s, V_s = eig_hermitian(problem.system.hamiltonian(shifted))
                state = exponential_from_eig(w_s, V_s, dt) @ prefix[j]
                probes.append(functional_from_overlaps(overlaps(suffix[j], state), functional))
            numeric[row_idx, col] = (probes[0] - probes[1]) / (2.0 * h)

    return GradientReport(
        segments=segments,
        channels=[c.name for c in problem.channels],
        analytic=analytic,
        finite_difference=numeric,
        step=h,
    )
