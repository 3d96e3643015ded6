"""
1/f gate-charge noise from ensembles of bistable fluctuators.

Spectral convention: one-sided, S(w) = 2 * integral C(t) exp(i w t) dt, so
that a fluctuator of amplitude v/2 and switching rate gamma contributes
2 v^2 gamma / (4 gamma^2 + w^2). With rates log-uniform on
[gamma_min, gamma_max] the ensemble gives S(w) ~ A / w for
2 gamma_min << w << 2 gamma_max when

    v^2 = 2 A ln(gamma_max / gamma_min) / (pi n_fluctuators).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal

from src.config import tolerance
from src.errors import ConfigurationError
from src.models.output import NoisyErrorReport
from src.models.scenario import NoiseConfig, NoiseSettings
from src.models.system import CONTROL_INDEX, ControlId
from src.physics.dynamics import PulseSet, TimeGrid, propagate
from src.physics.gates import GateTarget
from src.physics.hamiltonian import SystemModel
from src.utils.metrics import evaluate_propagator
from src.utils.seeding import noise_stream

logger = logging.getLogger(__name__)

# Time samples drawn per block, bounding memory at n_fluctuators x block
TRAJECTORY_BLOCK = 2048


@dataclass
class FluctuatorEnsemble:
    """Switching rates, coupling amplitudes and initial states of one qubit's fluctuators."""
    gammas: np.ndarray
    couplings: np.ndarray
    states: np.ndarray
    gamma_max: float

    @property
    def size(self) -> int:
        return self.gammas.size


def default_rate_window(tau: float) -> tuple[float, float]:
    """Two decades log-centered on the gate frequency 1/tau."""
    return 0.1 / tau, 10.0 / tau


def resolve_noise(settings: NoiseSettings, tau: float, seed: int, A: Optional[float] = None) -> NoiseConfig:
    """Fill in the default rate window and attach the seed."""
    gamma_min, gamma_max = default_rate_window(tau)
    return NoiseConfig(
        A=settings.A if A is None else A,
        gamma_min=settings.gamma_min if settings.gamma_min is not None else gamma_min,
        gamma_max=settings.gamma_max if settings.gamma_max is not None else gamma_max,
        n_fluctuators=settings.n_fluctuators,
        seed=seed,
        realizations=settings.realizations,
    )


def coupling_amplitude(cfg: NoiseConfig) -> float:
    """Uniform fluctuator amplitude v realizing S(w) = A / w."""
    return float(np.sqrt(2.0 * cfg.A * np.log(cfg.gamma_max / cfg.gamma_min) / (np.pi * cfg.n_fluctuators)))


def sample_ensemble(
    cfg: NoiseConfig,
    qubit: int,
    realization: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> FluctuatorEnsemble:
    """
    Draw one qubit's fluctuators.

    Rates follow P(gamma) ~ 1/gamma through gamma = gamma_min (gamma_max/gamma_min)^u,
    initial states are +-1 with equal probability. Without an explicit generator
    the stream noise/qubit-<qubit>/realization-<realization> of cfg.seed is used.
    """
    rng = noise_stream(cfg.seed, qubit, realization) if rng is None else rng
    u = rng.random(cfg.n_fluctuators)
    gammas = cfg.gamma_min * (cfg.gamma_max / cfg.gamma_min) ** u
    states = np.where(rng.random(cfg.n_fluctuators) < 0.5, -1.0, 1.0)
    couplings = np.full(cfg.n_fluctuators, coupling_amplitude(cfg))
    return FluctuatorEnsemble(gammas=gammas, couplings=couplings, states=states, gamma_max=cfg.gamma_max)


def trajectory(
    ensemble: FluctuatorEnsemble,
    grid: TimeGrid,
    seed: int | np.random.Generator,
) -> np.ndarray:
    """
    Offset-charge noise delta n_g(t_k) = sum_j v_j state_j(t_k) / 2 on the grid.

    Each fluctuator flips independently with probability gamma_j dt per segment;
    the first segment carries the initial states.
    """
    max_flip = tolerance("noise", "max_flip_probability")
    if ensemble.gamma_max * grid.dt >= max_flip:
        raise ConfigurationError(
            f"gamma_max*dt = {ensemble.gamma_max * grid.dt:.3g} must stay below {max_flip}; "
            f"increase n_steps or lower gamma_max"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.Philox(int(seed)))

    probabilities = (ensemble.gammas * grid.dt)[:, None]
    states = ensemble.states.copy()
    noise = np.empty(grid.n_steps)
    for start in range(0, grid.n_steps, TRAJECTORY_BLOCK):
        stop = min(start + TRAJECTORY_BLOCK, grid.n_steps)
        flips = rng.random((ensemble.size, stop - start)) < probabilities
        if start == 0:
            flips[:, 0] = False
        block = states[:, None] * (1.0 - 2.0 * (np.cumsum(flips, axis=1) % 2))
        noise[start:stop] = 0.5 * (ensemble.couplings @ block)
        states = block[:, -1]
    return noise


def realization_offsets(cfg: NoiseConfig, grid: TimeGrid, realization: int) -> np.ndarray:
    """(n_steps, 5) additive shifts: independent trajectories on NG1 and NG2."""
    offsets = np.zeros((grid.n_steps, len(CONTROL_INDEX)))
    for qubit, cid in ((1, ControlId.NG1), (2, ControlId.NG2)):
        rng = noise_stream(cfg.seed, qubit, realization)
        ensemble = sample_ensemble(cfg, qubit, realization, rng=rng)
        offsets[:, CONTROL_INDEX[cid]] = trajectory(ensemble, grid, rng)
    return offsets


def sample_trajectories(cfg: NoiseConfig, grid: TimeGrid, count: int, qubit: int = 1) -> np.ndarray:
    """(count, n_steps) trajectories of one qubit, realization r from its own stream."""
    rows = []
    for realization in range(count):
        rng = noise_stream(cfg.seed, qubit, realization)
        rows.append(trajectory(sample_ensemble(cfg, qubit, realization, rng=rng), grid, rng))
    return np.array(rows)


def noisy_gate_error(
    pulses: PulseSet,
    target: GateTarget,
    system: SystemModel,
    cfg: NoiseConfig,
    threads: int = 1,
    phase_sensitive: bool = False,
) -> NoisyErrorReport:
    """
    Mean and standard error of the gate error over cfg.realizations noise draws.

    Realizations run on a thread pool; results are collected in realization
    order so the report does not depend on the worker count.
    """
    grid = pulses.grid

    def run(realization: int) -> float:
        offsets = realization_offsets(cfg, grid, realization)
        U = propagate(pulses, system, offsets=offsets).U
        return evaluate_propagator(U, target, phase_sensitive=phase_sensitive).epsilon

    if cfg.A == 0.0:
        # no noise: every realization is the noiseless propagation
        epsilon = evaluate_propagator(propagate(pulses, system).U, target, phase_sensitive).epsilon
        epsilons = np.full(cfg.realizations, epsilon)
    elif threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            epsilons = np.array(list(pool.map(run, range(cfg.realizations))))
    else:
        epsilons = np.array([run(r) for r in range(cfg.realizations)])

    M = epsilons.size
    if M > 1 and np.ptp(epsilons) > 0.0:
        mean = float(np.mean(epsilons))
        stderr = float(np.std(epsilons, ddof=1) / np.sqrt(M))
    else:
        mean = float(epsilons[0])
        stderr = 0.0
    logger.info("Noise A=%.3g: mean epsilon %.4e +- %.2e over %d realizations", cfg.A, mean, stderr, M)
    return NoisyErrorReport(mean_epsilon=mean, stderr=stderr, M=M, epsilons=[float(e) for e in epsilons])


def averaged_periodogram(trajectories: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """
    One-sided spectrum averaged over trajectories, on angular frequencies.

    Returns (omega, S) without the zero-frequency bin, in the convention of the
    module docstring, i.e. directly comparable with A / omega.
    """
    freqs, power = signal.periodogram(np.atleast_2d(trajectories), fs=1.0 / dt, axis=-1)
    mean_power = power.mean(axis=0)
    return 2.0 * np.pi * freqs[1:], mean_power[1:]
