# Coupling presets
from src.schemes.base import CouplingScheme, energy_scale
from src.schemes.capacitive import CapacitiveScheme, baseline_cc_gate, experimental_cc_params, tau_cc
from src.schemes.josephson import JosephsonScheme, baseline_jj_gate, jj_params, tau_jj

__all__ = [
    "CouplingScheme",
    "energy_scale",
    "CapacitiveScheme",
    "baseline_cc_gate",
    "experimental_cc_params",
    "tau_cc",
    "JosephsonScheme",
    "baseline_jj_gate",
    "jj_params",
    "tau_jj",
]
