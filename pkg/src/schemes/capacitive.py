"""
Capacitive coupling preset.
"""

import numpy as np

from src.control.krotov import ControlChannel, ControlProblem
from src.models.output import GateError
from src.models.system import (
    ChargeBasis,
    ControlId,
    CouplingKind,
    CouplingSpec,
    GateKind,
    GateSign,
    QubitParams,
    SystemParams,
)
from src.physics.dynamics import PulseSet, TimeGrid
from src.physics.gates import GateTarget, make_gate_target
from src.physics.hamiltonian import SystemModel
from src.schemes.base import CouplingScheme

CC_TIME_FACTOR = 1.18

# Experimental ratios, energies in units of E_C of qubit 1
EJ1_OVER_EC1 = 0.0777
EJ2_OVER_EC2 = 0.0610
ECC_OVER_EC1 = 0.1653
EC2_OVER_EC1 = 1.157
IDLE_NG = 0.25


def tau_cc(E_J1: float) -> float:
    """tau_cc = 1.18 * pi / E_J1."""
    return CC_TIME_FACTOR * np.pi / E_J1


def experimental_cc_params(
    window: tuple[int, int] = (-1, 2),
    E_C2: float = EC2_OVER_EC1,
    n_g_idle: float = IDLE_NG,
) -> SystemParams:
    """Two capacitively coupled boxes with the experimental energy ratios."""
    return SystemParams(
        basis=ChargeBasis.from_window(window),
        qubit1=QubitParams(E_C=1.0, E_J_idle=EJ1_OVER_EC1, n_g_idle=n_g_idle),
        qubit2=QubitParams(E_C=E_C2, E_J_idle=EJ2_OVER_EC2 * E_C2, n_g_idle=n_g_idle),
        coupling=CouplingSpec(kind=CouplingKind.CAPACITIVE, E_cc=ECC_OVER_EC1),
    )


def resonant_ng2(params: SystemParams) -> float:
    """Offset charge putting qubit 2 on resonance when qubit 1 sits in charge state 1."""
    return 0.5 + params.coupling.E_cc * (1.0 - params.qubit1.n_g_idle) / (2.0 * params.qubit2.E_C)


class CapacitiveScheme(CouplingScheme):
    """
    Josephson energies fixed, gate charges pulsed.

    The non-optimized gate holds qubit 1 at idle and qubit 2 on its conditional
    resonance for tau_cc, flipping qubit 2 only when qubit 1 is in |1>.
    """

    kind = CouplingKind.CAPACITIVE

    def target(self, params: SystemParams, sign: GateSign = GateSign.PLUS) -> GateTarget:
        return make_gate_target(GateKind.G_CC, params.basis)

    def gate_time(self, params: SystemParams) -> float:
        return tau_cc(params.qubit1.E_J_idle)

    def at_sweep_point(self, params: SystemParams, value: float) -> SystemParams:
        """value = E_J1 / E_cc; E_J2 / E_J1 is kept."""
        E_J1 = value * params.coupling.E_cc
        ratio = params.qubit2.E_J_idle / params.qubit1.E_J_idle
        return SystemParams(
            basis=params.basis,
            qubit1=params.qubit1.at(E_J=E_J1),
            qubit2=params.qubit2.at(E_J=ratio * E_J1),
            coupling=params.coupling,
        )

    def baseline_pulses(self, params: SystemParams, grid: TimeGrid) -> PulseSet:
        return PulseSet.constant(grid, {
            ControlId.NG1: params.qubit1.n_g_idle,
            ControlId.NG2: resonant_ng2(params),
        })

    def control_problem(self, model: SystemModel, grid: TimeGrid) -> ControlProblem:
        q1 = model.params.qubit1
        q2 = model.params.qubit2
        channels = [
            ControlChannel(name="NG1", targets=(ControlId.NG1,), boundary=(q1.n_g_idle, q1.n_g_idle)),
            ControlChannel(name="NG2", targets=(ControlId.NG2,), boundary=(q2.n_g_idle, q2.n_g_idle)),
        ]
        return ControlProblem(system=model, grid=grid, channels=channels)


def baseline_cc_gate(
    params: SystemParams | None = None,
    n_steps: int = 1000,
    phase_sensitive: bool = False,
) -> GateError:
    """Error of the constant-parameter gate of duration tau_cc (experimental parameters by default)."""
    params = experimental_cc_params() if params is None else params
    return CapacitiveScheme().baseline_error(params, n_steps=n_steps, phase_sensitive=phase_sensitive)
