"""
Charge-basis Hamiltonians of two coupled Cooper pair boxes.

Energies are in units of a reference energy (default the charging energy of
qubit 1), hbar = 1, and the product basis orders |n1, n2> with qubit 1 major,
matching ``np.kron(H1, I) + np.kron(I, H2)``.
"""

from dataclasses import dataclass

import numpy as np

from src.config import tolerance
from src.errors import InternalError
from src.models.system import (
    CONTROL_INDEX,
    ChargeBasis,
    ControlId,
    CouplingKind,
    CouplingSpec,
    QubitParams,
    SystemParams,
)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InternalError(f"Operator must be square, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def is_hermitian(self, atol: float | None = None) -> bool:
        atol = tolerance("operators", "hermiticity") if atol is None else atol
        return self.hermiticity_error() <= atol

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if self.dim != other.dim:
            raise InternalError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        return HermitianOperator(self.entries + other.entries)


def _tunneling(basis: ChargeBasis) -> np.ndarray:
    """-(1/2) sum_n |n><n+1| + h.c.; multiply by E_J."""
    return -0.5 * (np.eye(basis.D, k=1) + np.eye(basis.D, k=-1))


def _product_charges(basis: ChargeBasis) -> tuple[np.ndarray, np.ndarray]:
    """Charge numbers n1, n2 of every product basis state."""
    n = basis.charges
    return np.repeat(n, basis.D), np.tile(n, basis.D)


def _exchange(basis: ChargeBasis) -> np.ndarray:
    """(1/2) sum |n1, n2+1><n1+1, n2| + h.c.; multiply by E_JJ."""
    dim = basis.D ** 2
    op = np.zeros((dim, dim))
    for n1 in range(basis.n_min, basis.n_max):
        for n2 in range(basis.n_min, basis.n_max):
            bra = basis.product_index(n1, n2 + 1)
            ket = basis.product_index(n1 + 1, n2)
            op[bra, ket] = 0.5
            op[ket, bra] = 0.5
    return op


# ==================== Builders ====================

def build_single_qubit_h(basis: ChargeBasis, E_C: float, E_J: float, n_g: float) -> HermitianOperator:
    """
    Single Cooper pair box in the truncated charge basis.

    Args:
        basis: Charge window
        E_C: Charging energy
        E_J: Josephson energy
        n_g: Offset charge

    Returns:
        D x D operator with diagonal E_C (n - n_g)^2 and -E_J/2 between neighbours
    """
    charging = np.diag(E_C * (basis.charges - n_g) ** 2)
    return HermitianOperator(charging + E_J * _tunneling(basis))


def build_cc_coupling(basis: ChargeBasis, E_cc: float, n_g1: float, n_g2: float) -> HermitianOperator:
    """Capacitive coupling E_cc (n1 - n_g1)(n2 - n_g2), diagonal in the product basis."""
    n1, n2 = _product_charges(basis)
    return HermitianOperator(np.diag(E_cc * (n1 - n_g1) * (n2 - n_g2)))


def build_jj_coupling(basis: ChargeBasis, E_JJ: float) -> HermitianOperator:
    """Cooper-pair exchange through the coupling junction."""
    return HermitianOperator(E_JJ * _exchange(basis))


def build_total_h(
    basis: ChargeBasis,
    q1: QubitParams,
    q2: QubitParams,
    coupling: CouplingSpec,
) -> HermitianOperator:
    """H1 x I + I x H2 + H_I using the instantaneous values carried by the parameters."""
    h1 = build_single_qubit_h(basis, q1.E_C, q1.E_J_idle, q1.n_g_idle)
    h2 = build_single_qubit_h(basis, q2.E_C, q2.E_J_idle, q2.n_g_idle)
    if h1.dim != basis.D or h2.dim != basis.D:
        raise InternalError("Single-qubit operators do not match the charge window")

    eye = np.eye(basis.D)
    local = HermitianOperator(np.kron(h1.entries, eye) + np.kron(eye, h2.entries))
    interaction = build_cc_coupling(basis, coupling.E_cc, q1.n_g_idle, q2.n_g_idle)
    if coupling.kind == CouplingKind.JOSEPHSON:
        interaction = interaction + build_jj_coupling(basis, coupling.E_JJ_idle)
    return local + interaction


# ==================== Fast path ====================

class SystemModel:
    """
    Precomputed operator pieces of the full Hamiltonian.

    Control values are passed as arrays in CONTROL_ORDER
    (EJ1, EJ2, EJJ, NG1, NG2); charging energies and E_cc are fixed.
    """

    def __init__(self, params: SystemParams):
        self.params = params
        self.basis = params.basis
        self.dim = params.basis.D ** 2
        self.E_C1 = params.qubit1.E_C
        self.E_C2 = params.qubit2.E_C
        self.E_cc = params.coupling.E_cc
        self.has_junction = params.coupling.kind == CouplingKind.JOSEPHSON

        eye = np.eye(params.basis.D)
        tunneling = _tunneling(params.basis)
        self.n1, self.n2 = _product_charges(params.basis)
        self._josephson = {
            ControlId.EJ1: np.kron(tunneling, eye).astype(complex),
            ControlId.EJ2: np.kron(eye, tunneling).astype(complex),
            ControlId.EJJ: _exchange(params.basis).astype(complex),
        }

    def idle_values(self) -> np.ndarray:
        return self.params.idle_values()

    def charging_diagonal(self, values: np.ndarray) -> np.ndarray:
        d1 = self.n1 - values[CONTROL_INDEX[ControlId.NG1]]
        d2 = self.n2 - values[CONTROL_INDEX[ControlId.NG2]]
        return self.E_C1 * d1 ** 2 + self.E_C2 * d2 ** 2 + self.E_cc * d1 * d2

    def hamiltonian(self, values: np.ndarray) -> np.ndarray:
        """Full Hamiltonian matrix for one set of control values."""
        h = np.diag(self.charging_diagonal(values)).astype(complex)
        h += values[CONTROL_INDEX[ControlId.EJ1]] * self._josephson[ControlId.EJ1]
        h += values[CONTROL_INDEX[ControlId.EJ2]] * self._josephson[ControlId.EJ2]
        if self.has_junction:
            h += values[CONTROL_INDEX[ControlId.EJJ]] * self._josephson[ControlId.EJJ]
        return h

    def derivative(self, control: ControlId, values: np.ndarray) -> np.ndarray:
        """dH/d(control) at the given control values."""
        if control.is_josephson:
            if control == ControlId.EJJ and not self.has_junction:
                return np.zeros((self.dim, self.dim), dtype=complex)
            return self._josephson[control]

        d1 = self.n1 - values[CONTROL_INDEX[ControlId.NG1]]
        d2 = self.n2 - values[CONTROL_INDEX[ControlId.NG2]]
        if control == ControlId.NG1:
            return np.diag(-2.0 * self.E_C1 * d1 - self.E_cc * d2).astype(complex)
        return np.diag(-2.0 * self.E_C2 * d2 - self.E_cc * d1).astype(complex)

    def operator(self, values: np.ndarray) -> HermitianOperator:
        return HermitianOperator(self.hamiltonian(values))

    def driven_norm(self, values: np.ndarray) -> float:
        """
        Largest absolute entry of H minus the idle charging diagonal.

        What remains is the tunnelling plus the shift the pulses make away from
        idle, the part a coarse grid fails to resolve.
        """
        idle = self.charging_diagonal(self.idle_values())
        return float(np.max(np.abs(self.hamiltonian(values) - np.diag(idle))))
