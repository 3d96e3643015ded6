"""
Scenario service - runs a configured study and assembles its record.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from src.config import ARTIFACT_VERSION
from src.control.krotov import OptResult, krotov_optimize
from src.errors import ConfigurationError, describe
from src.models.output import GateError, PointResult, RunRecord, Variant
from src.models.scenario import PulseSource, ScenarioConfig, ScenarioKind, SweepAxis
from src.models.system import CouplingKind, SystemParams
from src.physics.dynamics import PulseSet, TimeGrid, propagate, warn_if_coarse
from src.physics.gates import GateTarget, ideal_propagator
from src.physics.hamiltonian import SystemModel
from src.physics.noise import averaged_periodogram, resolve_noise, noisy_gate_error, sample_trajectories
from src.physics.spectral import cutoff_sweep, harmonic, lowpass
from src.schemes.base import CouplingScheme
from src.schemes.capacitive import CapacitiveScheme
from src.schemes.josephson import JosephsonScheme
from src.services import storage
from src.utils.metrics import evaluate_propagator
from src.utils.pulse_io import read_pulses, write_columns, write_pulses
from src.utils.seeding import stream, stream_name

logger = logging.getLogger(__name__)

PANELS = {
    ScenarioKind.JJ_LEAKAGE: "jj_leakage",
    ScenarioKind.CC_LEAKAGE: "cc_leakage",
    ScenarioKind.JJ_NOISE: "jj_noise",
    ScenarioKind.CC_NOISE: "cc_noise",
    ScenarioKind.JJ_FILTER: "jj_filter",
    ScenarioKind.CC_FILTER: "cc_filter",
    ScenarioKind.OPTIMIZE_ONLY: "optimize",
    ScenarioKind.EVALUATE_ONLY: "evaluate",
}

# Axis label of the rows of single-point scenarios
POINT_AXIS = "point"


@dataclass
class OptimizedPoint:
    """Optimization outcome at one system point, not yet persisted."""
    label: str
    params: SystemParams
    model: SystemModel
    target: GateTarget
    result: OptResult
    error: GateError
    baseline: GateError
    baseline_steps: int

    @property
    def grid(self) -> TimeGrid:
        return self.result.final_pulses.grid


@dataclass
class RunContext:
    """State shared by the steps of one run."""
    config: ScenarioConfig
    scheme: CouplingScheme
    params: SystemParams
    record: RunRecord
    out_dir: Optional[Path] = None
    threads: int = 1
    resolved: dict = field(default_factory=dict)

    @property
    def panel(self) -> str:
        return PANELS[self.config.scenario]

    @property
    def phase_sensitive(self) -> bool:
        return self.config.evaluation.phase_sensitive


class ScenarioService:
    """
    Runs scenario configs: leakage, noise and filter studies plus single
    optimizations and evaluations.
    """

    def __init__(self):
        self.schemes = {
            CouplingKind.JOSEPHSON: JosephsonScheme(),
            CouplingKind.CAPACITIVE: CapacitiveScheme(),
        }
        self.runners: dict[ScenarioKind, Callable[[RunContext], None]] = {
            ScenarioKind.JJ_LEAKAGE: self._run_leakage,
            ScenarioKind.CC_LEAKAGE: self._run_leakage,
            ScenarioKind.JJ_NOISE: self._run_noise,
            ScenarioKind.CC_NOISE: self._run_noise,
            ScenarioKind.JJ_FILTER: self._run_filter,
            ScenarioKind.CC_FILTER: self._run_filter,
            ScenarioKind.OPTIMIZE_ONLY: self._run_optimize,
            ScenarioKind.EVALUATE_ONLY: self._run_evaluate,
        }

    def scheme_for(self, config: ScenarioConfig) -> CouplingScheme:
        scheme = self.schemes.get(config.system.coupling.kind)
        if not scheme:
            raise ConfigurationError(f"Unsupported coupling kind: {config.system.coupling.kind}")
        return scheme

    def run_scenario(
        self,
        config: ScenarioConfig,
        out_dir: Optional[str | Path] = None,
        threads: int = 1,
    ) -> RunRecord:
        """
        Run a validated scenario.

        Failures after the run has started do not raise: the returned record
        is flagged incomplete, carries the error class and message, and keeps
        every point finished before the failure.

        Args:
            config: Validated scenario
            out_dir: Directory for record.json, curve.csv and pulse files; None keeps results in memory
            threads: Worker threads for sweep points and noise realizations

        Returns:
            RunRecord of the run
        """
        started = time.perf_counter()
        out_dir = Path(out_dir) if out_dir is not None else None
        record = RunRecord(
            artifact_version=ARTIFACT_VERSION,
            scenario=config.scenario.value,
            seed=config.seed,
            config=config.model_dump(mode="json"),
            seed_lineage={"root": str(config.seed)},
        )

        runner = self.runners.get(config.scenario)
        if not runner:
            raise ConfigurationError(f"Unsupported scenario: {config.scenario}")

        ctx = None
        try:
            scheme = self.scheme_for(config)
            ctx = RunContext(
                config=config,
                scheme=scheme,
                params=scheme.system_params(config.system),
                record=record,
                out_dir=out_dir,
                threads=max(1, int(threads)),
            )
            logger.info("Running %s (seed %d, %d threads)", config.scenario.value, config.seed, ctx.threads)
            runner(ctx)
        except Exception as exc:
            logger.error("Run of %s stopped: %s", config.scenario.value, exc)
            record.complete = False
            record.error = describe(exc)

        if ctx is not None:
            record.config["resolved"] = ctx.resolved
        record.wall_clock_s = time.perf_counter() - started
        if out_dir is not None:
            storage.write_curve(record.points, out_dir)
            storage.write_record(record, out_dir)
        logger.info(
            "%s %s with %d rows in %.1f s",
            config.scenario.value, "finished" if record.complete else "incomplete",
            len(record.points), record.wall_clock_s,
        )
        return record

    # ==================== Building blocks ====================

    def _map(self, ctx: RunContext, fn: Callable, items: list) -> Iterable:
        """Results in item order, computed on the thread pool when threads > 1."""
        if ctx.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=ctx.threads) as pool:
                yield from pool.map(fn, items)
        else:
            for item in items:
                yield fn(item)

    def _store_pulses(self, ctx: RunContext, label: str, pulses: PulseSet) -> Optional[str]:
        """Write pulses/<label>.txt and register it; returns the relative path."""
        if ctx.out_dir is None:
            return None
        relative = f"pulses/{label}.txt"
        write_pulses(ctx.out_dir / relative, pulses)
        ctx.record.pulse_files.append(relative)
        return relative

    def _baseline(self, ctx: RunContext, params: SystemParams) -> tuple[GateError, int]:
        """
        Non-optimized error, doubling n_steps until it converges when a
        convergence tolerance is configured.
        """
        settings = ctx.config.grid
        sign = ctx.config.system.gate_sign
        n_steps = settings.n_steps
        error = ctx.scheme.baseline_error(params, n_steps, sign, ctx.phase_sensitive, settings.tau)
        if settings.convergence_tolerance is None:
            return error, n_steps

        for _ in range(settings.max_doublings):
            refined = ctx.scheme.baseline_error(params, 2 * n_steps, sign, ctx.phase_sensitive, settings.tau)
            change = abs(refined.epsilon - error.epsilon)
            n_steps, error = 2 * n_steps, refined
            if change < settings.convergence_tolerance:
                break
        else:
            logger.warning(
                "Baseline error not converged to %.1e after %d doublings (n_steps=%d)",
                settings.convergence_tolerance, settings.max_doublings, n_steps,
            )
        return error, n_steps

    def _optimize(self, ctx: RunContext, params: SystemParams, label: str) -> OptimizedPoint:
        """Krotov optimization at one system point, with its baseline."""
        config = ctx.config
        scheme = ctx.scheme
        model = scheme.system_model(params)
        target = scheme.target(params, config.system.gate_sign)

        if config.krotov.warm_start:
            init = read_pulses(config.krotov.warm_start)
            grid = init.grid
        else:
            grid = scheme.grid(params, config.grid.n_steps, config.grid.tau)
            init = None
        problem = scheme.control_problem(model, grid)
        if init is None:
            init = scheme.initial_guess(params, grid, problem)
            if config.krotov.guess_spread:
                rng = stream(config.seed, "guess", label)
                init = scheme.randomized_guess(init, problem, rng, config.krotov.guess_spread)
                ctx.record.seed_lineage[label] = stream_name("guess", label)
        warn_if_coarse(init, model)

        result = krotov_optimize(problem, init, target, config.krotov)
        error = evaluate_propagator(propagate(result.final_pulses, model).U, target, ctx.phase_sensitive)
        baseline, baseline_steps = self._baseline(ctx, params)
        logger.info(
            "%s: optimized epsilon %.3e after %d iterations (%s), baseline %.3e",
            label, error.epsilon, result.iterations_run, result.terminated_by.value, baseline.epsilon,
        )
        return OptimizedPoint(
            label=label,
            params=params,
            model=model,
            target=target,
            result=result,
            error=error,
            baseline=baseline,
            baseline_steps=baseline_steps,
        )

    def _record_optimized(self, ctx: RunContext, point: OptimizedPoint, axis: str, value: float,
                          marked: bool = False) -> None:
        """Baseline and optimized rows, pulse file and error history of one point."""
        pulse_file = self._store_pulses(ctx, point.label, point.result.final_pulses)
        ctx.record.error_histories[point.label] = [float(e) for e in point.result.error_history]
        ctx.resolved.setdefault("gate_times", {})[point.label] = point.grid.tau
        ctx.resolved.setdefault("baseline_n_steps", {})[point.label] = point.baseline_steps
        ctx.record.points.append(PointResult(
            panel=ctx.panel, axis=axis, axis_value=value, variant=Variant.BASELINE,
            epsilon=point.baseline.epsilon, leakage_max=point.baseline.leakage_max, marked=marked,
        ))
        ctx.record.points.append(PointResult(
            panel=ctx.panel, axis=axis, axis_value=value, variant=Variant.OPTIMIZED,
            epsilon=point.error.epsilon, leakage_max=point.error.leakage_max,
            iterations=point.result.iterations_run, terminated_by=point.result.terminated_by,
            marked=marked, pulse_file=pulse_file,
        ))

    # ==================== Scenarios ====================

    def _run_leakage(self, ctx: RunContext) -> None:
        """Optimized and non-optimized error along the leakage axis."""
        sweep = ctx.config.sweep
        values = list(sweep.values)

        def run(indexed: tuple[int, float]) -> OptimizedPoint:
            index, value = indexed
            params = ctx.scheme.at_sweep_point(ctx.params, value)
            return self._optimize(ctx, params, label=f"{ctx.panel}_{index:03d}")

        for (index, value), point in zip(enumerate(values), self._map(ctx, run, list(enumerate(values)))):
            marked = sweep.mark is not None and bool(np.isclose(value, sweep.mark))
            self._record_optimized(ctx, point, sweep.axis.value, value, marked=marked)

    def _run_noise(self, ctx: RunContext) -> None:
        """Mean error of optimized and baseline pulses versus 1/f amplitude."""
        config = ctx.config
        point = self._optimize(ctx, ctx.params, label=f"{ctx.panel}_optimized")
        self._record_optimized(ctx, point, POINT_AXIS, 0.0)

        grid = point.grid
        optimized = point.result.final_pulses
        baseline = ctx.scheme.baseline_pulses(point.params, grid)
        axis = config.sweep.axis.value

        noiseless = {
            Variant.BASELINE_NOISELESS: evaluate_propagator(
                propagate(baseline, point.model).U, point.target, ctx.phase_sensitive),
            Variant.OPTIMIZED_NOISELESS: point.error,
        }
        for variant, error in noiseless.items():
            ctx.record.points.append(PointResult(
                panel=ctx.panel, axis=axis, axis_value=0.0, variant=variant,
                epsilon=error.epsilon, stderr=0.0, leakage_max=error.leakage_max,
            ))

        windows = []
        for A in config.sweep.values:
            cfg = resolve_noise(config.noise, grid.tau, config.seed, A=A)
            windows.append({"A": A, "gamma_min": cfg.gamma_min, "gamma_max": cfg.gamma_max})
            for variant, pulses in ((Variant.BASELINE, baseline), (Variant.OPTIMIZED, optimized)):
                report = noisy_gate_error(pulses, point.target, point.model, cfg, ctx.threads, ctx.phase_sensitive)
                ctx.record.points.append(PointResult(
                    panel=ctx.panel, axis=axis, axis_value=A, variant=variant,
                    epsilon=report.mean_epsilon, stderr=report.stderr,
                ))
        ctx.resolved["noise"] = windows
        realizations = config.noise.realizations
        ctx.record.seed_lineage["noise"] = (
            f"{stream_name('noise', 'qubit-<i>', 'realization-<r>')} for i in 1..2, r in 0..{realizations - 1}"
        )

    def _run_filter(self, ctx: RunContext) -> None:
        """Error of the band-limited optimized pulse versus cutoff."""
        config = ctx.config
        point = self._optimize(ctx, ctx.params, label=f"{ctx.panel}_optimized")
        self._record_optimized(ctx, point, POINT_AXIS, 0.0)

        grid = point.grid
        pulses = point.result.final_pulses
        axis = config.sweep.axis
        values = list(config.sweep.values)
        if axis == SweepAxis.CUTOFF_HARMONICS:
            cutoffs = [harmonic(grid, k) for k in values]
            nyquist = grid.n_steps / 2
        else:
            cutoffs = values
            nyquist = np.pi / grid.dt
        ctx.resolved["cutoffs"] = cutoffs

        sweep = cutoff_sweep(pulses, point.target, point.model, cutoffs, ctx.threads, ctx.phase_sensitive)
        for index, (value, omega_c, error, drift) in enumerate(
                zip(values, cutoffs, sweep.errors, sweep.boundary_drift)):
            pulse_file = self._store_pulses(ctx, f"{ctx.panel}_filtered_{index:03d}", lowpass(pulses, omega_c))
            ctx.record.points.append(PointResult(
                panel=ctx.panel, axis=axis.value, axis_value=value, variant=Variant.FILTERED,
                epsilon=error.epsilon, leakage_max=error.leakage_max, boundary_drift=drift,
                pulse_file=pulse_file,
            ))
        ctx.record.points.append(PointResult(
            panel=ctx.panel, axis=axis.value, axis_value=float(nyquist), variant=Variant.UNFILTERED,
            epsilon=sweep.reference.epsilon, leakage_max=sweep.reference.leakage_max, boundary_drift=0.0,
        ))
        if ctx.out_dir is not None:
            storage.write_cutoff_table(sweep, ctx.out_dir)

    def _run_optimize(self, ctx: RunContext) -> None:
        """Single optimization at the configured system."""
        point = self._optimize(ctx, ctx.params, label=f"{ctx.panel}_optimized")
        self._record_optimized(ctx, point, POINT_AXIS, 0.0)

    def _run_evaluate(self, ctx: RunContext) -> None:
        """Error of baseline pulses, a pulse file or the ideal propagator."""
        config = ctx.config
        settings = config.evaluate
        source = settings.source if settings is not None else PulseSource.BASELINE
        model = ctx.scheme.system_model(ctx.params)
        target = ctx.scheme.target(ctx.params, config.system.gate_sign)

        if source == PulseSource.IDEAL:
            U = ideal_propagator(target)
        else:
            if source == PulseSource.PULSE_FILE:
                pulses = read_pulses(settings.pulse_file)
            else:
                grid = ctx.scheme.grid(ctx.params, config.grid.n_steps, config.grid.tau)
                pulses = ctx.scheme.baseline_pulses(ctx.params, grid)
            ctx.resolved.setdefault("gate_times", {})[ctx.panel] = pulses.grid.tau
            U = propagate(pulses, model).U

        error = evaluate_propagator(U, target, ctx.phase_sensitive)
        logger.info("Evaluated %s source: epsilon %.3e, leakage %.3e", source.value, error.epsilon, error.leakage_max)
        ctx.record.points.append(PointResult(
            panel=ctx.panel, axis=POINT_AXIS, axis_value=0.0, variant=Variant.EVALUATED,
            epsilon=error.epsilon, leakage_max=error.leakage_max,
        ))

    # ==================== Noise spectrum ====================

    def noise_spectrum(
        self,
        config: ScenarioConfig,
        trajectories: int,
        samples: Optional[int] = None,
        out_dir: Optional[str | Path] = None,
    ) -> dict:
        """
        Averaged periodogram of the configured fluctuator ensemble.

        Trajectories use the gate's time step over `samples` segments (default
        32 gate times) so the spectrum resolves frequencies below 1/tau.

        Returns:
            Dict with omega, psd, target (A / omega) and the first trajectory pair
        """
        if config.noise is None:
            raise ConfigurationError("psd requires a noise section")
        scheme = self.scheme_for(config)
        params = scheme.system_params(config.system)
        gate = scheme.grid(params, config.grid.n_steps, config.grid.tau)
        n_samples = samples if samples is not None else 32 * gate.n_steps
        grid = TimeGrid(tau=gate.dt * n_samples, n_steps=n_samples)
        cfg = resolve_noise(config.noise, gate.tau, config.seed)

        first = sample_trajectories(cfg, grid, trajectories, qubit=1)
        second = sample_trajectories(cfg, grid, 1, qubit=2)[0]
        omega, psd = averaged_periodogram(first, grid.dt)
        target = cfg.A / omega
        logger.info(
            "Periodogram of %d trajectories x %d samples, gamma window [%.3g, %.3g]",
            trajectories, n_samples, cfg.gamma_min, cfg.gamma_max,
        )

        if out_dir is not None:
            out_dir = Path(out_dir)
            header = (
                f"one-sided PSD of delta n_g on angular frequency; A={cfg.A:g}, "
                f"gamma_min={cfg.gamma_min:.6g}, gamma_max={cfg.gamma_max:.6g}, seed={cfg.seed}"
            )
            storage.write_psd(omega, psd, target, out_dir, header=header)
            write_columns(out_dir / "trajectory.txt", grid, {"NG1": first[0], "NG2": second})
        return {"omega": omega, "psd": psd, "target": target, "trajectory": (first[0], second), "config": cfg}
