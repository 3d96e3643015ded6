"""
Brick-wall band limiting of pulses.

Frequency convention: angular frequencies, DFT bin k of an n_steps-sample
pulse on [0, tau) sits at omega_k = 2 pi k / tau.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from src.errors import InputError
from src.models.output import CutoffSweep
from src.physics.dynamics import PulseSet, TimeGrid, propagate
from src.physics.gates import GateTarget
from src.physics.hamiltonian import SystemModel
from src.utils.metrics import evaluate_propagator

logger = logging.getLogger(__name__)


def angular_frequencies(grid: TimeGrid) -> np.ndarray:
    """Non-negative DFT bin frequencies of a real pulse on the grid."""
    return 2.0 * np.pi * np.fft.rfftfreq(grid.n_steps, d=grid.dt)


def harmonic(grid: TimeGrid, k: float) -> float:
    """Angular frequency of the k-th harmonic of the gate time."""
    return 2.0 * np.pi * k / grid.tau


def highest_kept_bin(grid: TimeGrid, omega_c: float) -> float:
    """
    Largest harmonic index k with omega_k <= omega_c.

    Compared on the index k = omega_c tau / (2 pi) with a small relative
    tolerance, so a cutoff built as harmonic(grid, k) or pi/dt keeps bin k.
    """
    k = omega_c * grid.tau / (2.0 * np.pi)
    return float(np.floor(k * (1.0 + 1e-12) + 1e-9))


def lowpass_samples(samples: np.ndarray, grid: TimeGrid, omega_c: float) -> np.ndarray:
    """Zero every DFT coefficient above omega_c; the result is exactly real."""
    coefficients = np.fft.rfft(samples)
    coefficients[np.arange(coefficients.size) > highest_kept_bin(grid, omega_c)] = 0.0
    return np.fft.irfft(coefficients, n=grid.n_steps)


def lowpass(pulses: PulseSet, omega_c: float) -> PulseSet:
    """
    Band-limit every field of a pulse set.

    Josephson fields that ring below zero are clipped at zero, since a negative
    junction energy is not physical. A clipped field is no longer band-limited,
    so idempotence and the projection property hold only for fields that were
    not clipped.
    """
    if omega_c < 0:
        raise InputError(f"Cutoff must be non-negative, got {omega_c}")
    fields = {}
    for cid, samples in pulses.fields.items():
        filtered = lowpass_samples(samples, pulses.grid, omega_c)
        if cid.is_josephson and np.any(filtered < 0):
            logger.warning("Clipping %d negative %s samples after filtering at omega_c=%.4g",
                           int(np.sum(filtered < 0)), cid.value, omega_c)
            filtered = np.maximum(filtered, 0.0)
        fields[cid] = filtered
    return PulseSet(grid=pulses.grid, fields=fields)


def boundary_drift(original: PulseSet, filtered: PulseSet) -> float:
    """Largest change of the first or last sample over all fields."""
    drift = 0.0
    for cid, samples in original.fields.items():
        other = filtered.fields[cid]
        drift = max(drift, abs(other[0] - samples[0]), abs(other[-1] - samples[-1]))
    return float(drift)


def cutoff_sweep(
    pulses: PulseSet,
    target: GateTarget,
    system: SystemModel,
    cutoffs: Sequence[float],
    threads: int = 1,
    phase_sensitive: bool = False,
) -> CutoffSweep:
    """Gate error of the filtered pulses for each cutoff, plus the unfiltered reference."""
    cutoffs = [float(c) for c in cutoffs]
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise InputError("Cutoffs must be strictly increasing")

    def run(omega_c: float):
        filtered = lowpass(pulses, omega_c)
        error = evaluate_propagator(propagate(filtered, system).U, target, phase_sensitive)
        return error, boundary_drift(pulses, filtered)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, cutoffs))
    else:
        results = [run(c) for c in cutoffs]

    reference = evaluate_propagator(propagate(pulses, system).U, target, phase_sensitive)
    return CutoffSweep(
        cutoffs=cutoffs,
        errors=[r[0] for r in results],
        reference=reference,
        boundary_drift=[r[1] for r in results],
    )
