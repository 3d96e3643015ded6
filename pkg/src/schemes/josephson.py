"""
Josephson-junction coupling preset.
"""

import numpy as np

from src.control.krotov import ControlChannel, ControlProblem
from src.models.output import GateError
from src.models.system import (
    ChargeBasis,
    ControlId,
    CouplingKind,
    CouplingSpec,
    GateSign,
    QubitParams,
    SystemParams,
)
from src.physics.dynamics import PulseSet, TimeGrid
from src.physics.gates import GateTarget, gate_kind_for, make_gate_target
from src.physics.hamiltonian import SystemModel
from src.schemes.base import CouplingScheme

JJ_TIME_FACTOR = 0.97
DEFAULT_RESIDUAL_RATIO = 0.05
TIED_CONTROLS = (ControlId.EJ1, ControlId.EJ2, ControlId.EJJ)


def tau_jj(E_JJ: float) -> float:
    """tau_JJ = 0.97 * 2 pi / E_JJ."""
    return JJ_TIME_FACTOR * 2.0 * np.pi / E_JJ


def jj_params(
    ej_over_ec: float = 0.05,
    residual_ratio: float = DEFAULT_RESIDUAL_RATIO,
    n_g: float = 0.5,
    window: tuple[int, int] = (-1, 2),
    E_C: float = 1.0,
) -> SystemParams:
    """Equal qubits with all Josephson energies equal to ej_over_ec * E_C."""
    E = ej_over_ec * E_C
    qubit = QubitParams(E_C=E_C, E_J_idle=E, n_g_idle=n_g)
    return SystemParams(
        basis=ChargeBasis.from_window(window),
        qubit1=qubit,
        qubit2=qubit,
        coupling=CouplingSpec(kind=CouplingKind.JOSEPHSON, E_cc=residual_ratio * E, E_JJ_idle=E),
    )


class JosephsonScheme(CouplingScheme):
    """
    Both qubits at a fixed working point, one shared pulse on EJ1 = EJ2 = EJJ.

    The non-optimized gate keeps all three energies at E_JJ for tau_JJ.
    """

    kind = CouplingKind.JOSEPHSON

    def target(self, params: SystemParams, sign: GateSign = GateSign.PLUS) -> GateTarget:
        return make_gate_target(gate_kind_for(sign), params.basis)

    def gate_time(self, params: SystemParams) -> float:
        return tau_jj(params.coupling.E_JJ_idle)

    def at_sweep_point(self, params: SystemParams, value: float) -> SystemParams:
        """value = E_J / E_C of qubit 1; the residual E_cc / E_JJ ratio is kept."""
        E_JJ = params.coupling.E_JJ_idle
        ratio = params.coupling.E_cc / E_JJ if E_JJ > 0 else DEFAULT_RESIDUAL_RATIO
        E = value * params.qubit1.E_C
        return SystemParams(
            basis=params.basis,
            qubit1=params.qubit1.at(E_J=E),
            qubit2=params.qubit2.at(E_J=E),
            coupling=CouplingSpec(kind=CouplingKind.JOSEPHSON, E_cc=ratio * E, E_JJ_idle=E),
        )

    def baseline_pulses(self, params: SystemParams, grid: TimeGrid) -> PulseSet:
        E = params.coupling.E_JJ_idle
        return PulseSet.constant(grid, {cid: E for cid in TIED_CONTROLS})

    def control_problem(self, model: SystemModel, grid: TimeGrid) -> ControlProblem:
        idle = model.params.coupling.E_JJ_idle
        channel = ControlChannel(name="EJ", targets=TIED_CONTROLS, boundary=(idle, idle))
        return ControlProblem(system=model, grid=grid, channels=[channel])


def baseline_jj_gate(
    params: SystemParams,
    n_steps: int = 1000,
    sign: GateSign = GateSign.PLUS,
    phase_sensitive: bool = False,
) -> GateError:
    """Error of the constant-coupling gate of duration tau_JJ."""
    return JosephsonScheme().baseline_error(params, n_steps=n_steps, sign=sign, phase_sensitive=phase_sensitive)
