"""
Base coupling scheme with the steps shared by both presets.
"""

from abc import ABC, abstractmethod
from dataclasses import replace
from typing import Optional

import numpy as np

from src.control.krotov import ControlProblem
from src.models.output import GateError
from src.models.scenario import SystemSettings
from src.models.system import (
    ChargeBasis,
    CouplingKind,
    CouplingSpec,
    GateSign,
    QubitParams,
    SystemParams,
)
from src.physics.dynamics import PulseSet, TimeGrid, propagate
from src.physics.gates import GateTarget
from src.physics.hamiltonian import SystemModel
from src.utils.metrics import evaluate_propagator


def energy_scale(params: SystemParams, kappa: float) -> SystemParams:
    """Multiply every energy by kappa; with tau / kappa the evolution is unchanged."""
    def qubit(q: QubitParams) -> QubitParams:
        return QubitParams(E_C=q.E_C * kappa, E_J_idle=q.E_J_idle * kappa, n_g_idle=q.n_g_idle)

    coupling = replace(
        params.coupling,
        E_cc=params.coupling.E_cc * kappa,
        E_JJ_idle=params.coupling.E_JJ_idle * kappa,
    )
    return SystemParams(basis=params.basis, qubit1=qubit(params.qubit1), qubit2=qubit(params.qubit2), coupling=coupling)


class CouplingScheme(ABC):
    """Base class for the Josephson and capacitive coupling presets."""

    kind: CouplingKind

    def system_params(self, settings: SystemSettings) -> SystemParams:
        """Domain parameters from a validated system section."""
        coupling = settings.coupling
        E_cc = coupling.E_cc
        if coupling.residual_ratio is not None and coupling.kind == CouplingKind.JOSEPHSON:
            E_cc = coupling.residual_ratio * coupling.E_JJ_idle
        return SystemParams(
            basis=ChargeBasis.from_window(settings.charge_window),
            qubit1=QubitParams(**settings.qubit1.model_dump()),
            qubit2=QubitParams(**settings.qubit2.model_dump()),
            coupling=CouplingSpec(kind=coupling.kind, E_cc=E_cc, E_JJ_idle=coupling.E_JJ_idle),
        )

    def system_model(self, params: SystemParams) -> SystemModel:
        return SystemModel(params)

    def grid(self, params: SystemParams, n_steps: int, tau: Optional[float] = None) -> TimeGrid:
        """Grid over the scheme's analytic gate time unless tau is given."""
        return TimeGrid(tau=self.gate_time(params) if tau is None else tau, n_steps=n_steps)

    @abstractmethod
    def target(self, params: SystemParams, sign: GateSign = GateSign.PLUS) -> GateTarget:
        """Gate this scheme implements."""
        pass

    @abstractmethod
    def gate_time(self, params: SystemParams) -> float:
        """Analytic duration of the non-optimized gate."""
        pass

    @abstractmethod
    def at_sweep_point(self, params: SystemParams, value: float) -> SystemParams:
        """System at one value of the scheme's leakage-sweep axis."""
        pass

    @abstractmethod
    def baseline_pulses(self, params: SystemParams, grid: TimeGrid) -> PulseSet:
        """Non-optimized analytic pulses."""
        pass

    @abstractmethod
    def control_problem(self, model: SystemModel, grid: TimeGrid) -> ControlProblem:
        """Channels the optimizer may change, with their idle boundary values."""
        pass

    def initial_guess(self, params: SystemParams, grid: TimeGrid, problem: ControlProblem) -> PulseSet:
        """Baseline pulses with the first and last segments at the boundary values."""
        pulses = self.baseline_pulses(params, grid)
        updates = {}
        for channel in problem.channels:
            start, end = channel.boundary
            for cid in channel.targets:
                samples = pulses.fields[cid].copy()
                samples[0] = start
                samples[-1] = end
                updates[cid] = samples
        return pulses.with_fields(updates)

    def randomized_guess(
        self,
        pulses: PulseSet,
        problem: ControlProblem,
        rng: np.random.Generator,
        spread: float,
        harmonics: int = 4,
    ) -> PulseSet:
        """
        Smooth seeded variation of a guess, pinned segments untouched.

        Each channel gets a sum of sin(k pi t / tau), k = 1..harmonics, with
        uniform random weights bounded by spread in total. Josephson channels
        are scaled by 1 + variation, offset charges shifted by it.
        """
        t = problem.grid.t_mid / problem.grid.tau
        modes = np.sin(np.pi * np.outer(t, np.arange(1, harmonics + 1)))
        updates = {}
        for channel in problem.channels:
            variation = modes @ (rng.uniform(-1.0, 1.0, harmonics) * spread / harmonics)
            samples = problem.channel_samples(pulses, channel).copy()
            if channel.non_negative:
                samples[1:-1] *= 1.0 + variation[1:-1]
            else:
                samples[1:-1] += variation[1:-1]
            for cid in channel.targets:
                updates[cid] = samples
        return pulses.with_fields(updates)

    def baseline_error(
        self,
        params: SystemParams,
        n_steps: int = 1000,
        sign: GateSign = GateSign.PLUS,
        phase_sensitive: bool = False,
        tau: Optional[float] = None,
    ) -> GateError:
        """Error of the non-optimized gate."""
        grid = self.grid(params, n_steps, tau)
        model = self.system_model(params)
        U = propagate(self.baseline_pulses(params, grid), model).U
        return evaluate_propagator(U, self.target(params, sign), phase_sensitive)
