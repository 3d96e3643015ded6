"""
Krotov optimization of piecewise-constant gate pulses.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.config import tolerance
from src.errors import InputError, NumericalError
from src.models.output import TerminatedBy
from src.models.scenario import Functional, KrotovConfig, PulseShape
from src.models.system import CONTROL_INDEX, ControlId
from src.physics.dynamics import (
    PulseSet,
    TimeGrid,
    divided_differences,
    eig_hermitian,
    exponential_from_eig,
)
from src.physics.gates import GateTarget
from src.physics.hamiltonian import SystemModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ControlChannel:
    """One optimized pulse driving one or more tied control ids."""
    name: str
    targets: tuple[ControlId, ...]
    boundary: tuple[float, float]

    @property
    def non_negative(self) -> bool:
        return all(t.is_josephson for t in self.targets)


@dataclass
class ControlProblem:
    """System, grid and optimized channels; every other control stays at its idle value."""
    system: SystemModel
    grid: TimeGrid
    channels: list[ControlChannel]

    def values_matrix(self, pulses: PulseSet) -> np.ndarray:
        return pulses.values_matrix(self.system.idle_values())

    def channel_samples(self, pulses: PulseSet, channel: ControlChannel) -> np.ndarray:
        return pulses.fields[channel.targets[0]]

    def derivative(self, channel: ControlChannel, values: np.ndarray) -> np.ndarray:
        """dH/dg for a channel; tied targets add up."""
        dH = self.system.derivative(channel.targets[0], values)
        for cid in channel.targets[1:]:
            dH = dH + self.system.derivative(cid, values)
        return dH

    def pulses_from(self, samples: dict[str, np.ndarray]) -> PulseSet:
        fields = {}
        for channel in self.channels:
            for cid in channel.targets:
                fields[cid] = np.array(samples[channel.name], dtype=float)
        return PulseSet(grid=self.grid, fields=fields)

    def check_pulses(self, pulses: PulseSet) -> None:
        """Raise InputError unless every channel is present, tied and pinned."""
        if pulses.grid.n_steps != self.grid.n_steps or not np.isclose(pulses.grid.tau, self.grid.tau):
            raise InputError("Initial pulses are not on the problem grid")
        for channel in self.channels:
            missing = [c.value for c in channel.targets if c not in pulses.fields]
            if missing:
                raise InputError(f"Channel {channel.name} misses fields {missing}")
            reference = pulses.fields[channel.targets[0]]
            for cid in channel.targets[1:]:
                if not np.array_equal(pulses.fields[cid], reference):
                    raise InputError(f"Tied fields of channel {channel.name} differ")
            start, end = channel.boundary
            if not (np.isclose(reference[0], start, rtol=0, atol=1e-12)
                    and np.isclose(reference[-1], end, rtol=0, atol=1e-12)):
                raise InputError(
                    f"Channel {channel.name} must start at {start} and end at {end}, "
                    f"got {reference[0]} and {reference[-1]}"
                )


@dataclass
class OptResult:
    """Outcome of krotov_optimize."""
    final_pulses: PulseSet
    error_history: np.ndarray
    iterations_run: int
    terminated_by: TerminatedBy
    monotonicity_violations: int = 0

    @property
    def epsilon_min(self) -> float:
        return float(self.error_history[-1])


# ==================== Functional ====================

def weight_shape(cfg: KrotovConfig, grid: TimeGrid) -> np.ndarray:
    """s(t) in [0, 1] at segment midpoints; first and last segments are 0."""
    t = grid.t_mid
    if cfg.shape == PulseShape.FLAT_TOP:
        ramp = cfg.ramp_fraction * grid.tau
        edge = np.minimum(t, grid.tau - t)
        s = np.where(edge < ramp, np.sin(0.5 * np.pi * edge / ramp) ** 2, 1.0)
    else:
        s = np.sin(np.pi * t / grid.tau) ** 2
    s[0] = 0.0
    s[-1] = 0.0
    return s


def overlaps(targets: np.ndarray, states: np.ndarray) -> np.ndarray:
    """<T_k|psi_k> for every computational input k."""
    return np.sum(targets.conj() * states, axis=0)


def functional_from_overlaps(o: np.ndarray, functional: Functional) -> float:
    """Quantity Krotov maximizes: |tau|^2 or the mean squared per-state overlap."""
    if functional == Functional.PER_STATE:
        return float(np.sum(np.abs(o) ** 2) / 4.0)
    return float(abs(np.sum(o) / 4.0) ** 2)


def functional_value(targets: np.ndarray, states: np.ndarray, functional: Functional) -> float:
    return functional_from_overlaps(overlaps(targets, states), functional)


def gate_epsilon(targets: np.ndarray, states: np.ndarray) -> float:
    """1 - |(1/4) sum_k <T_k|psi_k(tau)>|."""
    return float(np.clip(1.0 - abs(np.sum(overlaps(targets, states)) / 4.0), 0.0, 1.0))


def costate_weights(targets: np.ndarray, states: np.ndarray, functional: Functional) -> np.ndarray:
    """Per-input factors c_k with chi_k(tau) = c_k |T_k>."""
    o = overlaps(targets, states)
    if functional == Functional.PER_STATE:
        return o / 4.0
    return np.full(o.shape, np.sum(o) / 16.0)


def terminal_costates(targets: np.ndarray, states: np.ndarray, functional: Functional) -> np.ndarray:
    """chi_k(tau); the gradient of the functional is 2 Re sum_k <chi_k|dU|psi_k>."""
    return targets * costate_weights(targets, states, functional)[None, :]


# ==================== Optimizer ====================

def _segment_coupling(
    chi_next: np.ndarray,
    psi: np.ndarray,
    w: np.ndarray,
    V: np.ndarray,
    phi: np.ndarray,
    dH: np.ndarray,
) -> float:
    """Re sum_k <chi_k(t_{j+1})| dU_j |psi_k(t_j)> evaluated in the eigenbasis of H_j."""
    Vh = V.conj().T
    a = Vh @ chi_next
    b = Vh @ psi
    M = (Vh @ dH @ V) * phi
    return float(np.real(np.sum(a.conj() * (M @ b))))


def krotov_optimize(
    problem: ControlProblem,
    init: PulseSet,
    target: GateTarget,
    cfg: KrotovConfig,
) -> OptResult:
    """
    Krotov iteration on the 4 embedded computational inputs.

    Each iteration back-propagates the costates chi_k with the current pulses,
    then re-propagates forward while updating every channel segment by segment
    with g_j += s_j / lambda0 * Re sum_k <chi_k(t_{j+1})| dU_j |psi_k(t_j)> / dt.

    Args:
        problem: Control problem (channels and grid)
        init: Initial pulses honoring the channel boundary values
        target: Gate target whose embedding matches the system
        cfg: Optimizer settings

    Returns:
        OptResult with the error history starting at the initial error
    """
    if target.dim != problem.system.dim:
        raise InputError(f"Target dimension {target.dim} does not match system dimension {problem.system.dim}")
    problem.check_pulses(init)

    grid = problem.grid
    dt = grid.dt
    s = weight_shape(cfg, grid)
    slack = tolerance("krotov", "monotonicity_slack")
    log_every = int(tolerance("krotov", "log_every"))
    B = target.embedding
    T = target.target_states

    values = problem.values_matrix(init)
    samples = {ch.name: problem.channel_samples(init, ch).copy() for ch in problem.channels}

    eigs = [eig_hermitian(problem.system.hamiltonian(row)) for row in values]
    steps = [exponential_from_eig(w, V, dt) for w, V in eigs]
    psi = B.copy()
    for step in steps:
        psi = step @ psi

    eps = gate_epsilon(T, psi)
    history = [eps]
    violations = 0
    stalled_for = 0
    terminated_by = TerminatedBy.MAX_ITERS
    iteration = 0

    if eps <= cfg.target_error:
        terminated_by = TerminatedBy.TARGET_REACHED

    while terminated_by != TerminatedBy.TARGET_REACHED and iteration < cfg.max_iters:
        iteration += 1

        chis = np.empty((grid.n_steps + 1,) + psi.shape, dtype=complex)
        chis[-1] = terminal_costates(T, psi, cfg.functional)
        for j in range(grid.n_steps - 1, -1, -1):
            chis[j] = steps[j].conj().T @ chis[j + 1]

        psi = B.copy()
        for j in range(grid.n_steps):
            w, V = eigs[j]
            if s[j] > 0.0:
                row = values[j].copy()
                phi = divided_differences(w, dt)
                for channel in problem.channels:
                    q = _segment_coupling(chis[j + 1], psi, w, V, phi, problem.derivative(channel, row)) / dt
                    updated = samples[channel.name][j] + s[j] * q / cfg.lambda0
                    if not np.isfinite(updated):
                        raise NumericalError(
                            f"Non-finite update at iteration {iteration}, segment {j}, channel {channel.name}; "
                            f"increase lambda0 (now {cfg.lambda0}) or n_steps"
                        )
                    if channel.non_negative:
                        updated = max(updated, 0.0)
                    samples[channel.name][j] = updated
                    for cid in channel.targets:
                        values[j, CONTROL_INDEX[cid]] = updated
                w, V = eig_hermitian(problem.system.hamiltonian(values[j]))
                eigs[j] = (w, V)
                steps[j] = exponential_from_eig(w, V, dt)
            psi = steps[j] @ psi

        new_eps = gate_epsilon(T, psi)
        if new_eps > eps + slack:
            violations += 1
            logger.warning(
                "Error increased at iteration %d (%.3e -> %.3e); lambda0=%g may be too small",
                iteration, eps, new_eps, cfg.lambda0,
            )
        history.append(new_eps)

        improvement = (eps - new_eps) / max(eps, np.finfo(float).tiny)
        stalled_for = stalled_for + 1 if improvement < cfg.stall_tolerance else 0
        eps = new_eps

        if iteration % log_every == 0:
            logger.info("Krotov iteration %d: epsilon=%.6e", iteration, eps)
        if eps <= cfg.target_error:
            terminated_by = TerminatedBy.TARGET_REACHED
        elif stalled_for >= cfg.stall_window:
            terminated_by = TerminatedBy.STALLED
            break

    logger.info(
        "Krotov finished after %d iterations (%s): epsilon_min=%.6e",
        iteration, terminated_by.value, history[-1],
    )
    return OptResult(
        final_pulses=init.with_fields(problem.pulses_from(samples).fields),
        error_history=np.array(history),
        iterations_run=iteration,
        terminated_by=terminated_by,
        monotonicity_violations=violations,
    )
