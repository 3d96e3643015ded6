"""Shared fixtures for the charge qubit toolkit tests."""

import copy

import numpy as np
import pytest
import yaml

from src.models.system import ChargeBasis
from src.schemes.capacitive import experimental_cc_params
from src.schemes.josephson import jj_params

JJ_SCENARIO = {
    "schema_version": 1,
    "scenario": "OptimizeOnly",
    "seed": 1234,
    "system": {
        "charge_window": [0, 1],
        "qubit1": {"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
        "qubit2": {"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
        "coupling": {"kind": "josephson", "E_cc": 0.0025, "E_JJ_idle": 0.05, "residual_ratio": 0.05},
    },
    "grid": {"n_steps": 60},
    "krotov": {"lambda0": 1000.0, "max_iters": 2, "target_error": 1.0e-12},
}

CC_SCENARIO = {
    "schema_version": 1,
    "scenario": "OptimizeOnly",
    "seed": 4321,
    "system": {
        "charge_window": [0, 1],
        "qubit1": {"E_C": 1.0, "E_J_idle": 0.0777, "n_g_idle": 0.25},
        "qubit2": {"E_C": 1.157, "E_J_idle": 0.070577, "n_g_idle": 0.25},
        "coupling": {"kind": "capacitive", "E_cc": 0.1653},
    },
    "grid": {"n_steps": 60},
    "krotov": {"lambda0": 1000.0, "max_iters": 2, "target_error": 1.0e-12},
}


@pytest.fixture
def basis():
    return ChargeBasis(n_min=-1, n_max=2)


@pytest.fixture
def jj_system():
    return jj_params(ej_over_ec=0.05)


@pytest.fixture
def cc_system():
    return experimental_cc_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def jj_scenario():
    """Small Josephson scenario dict; tests update it in place."""
    return copy.deepcopy(JJ_SCENARIO)


@pytest.fixture
def cc_scenario():
    return copy.deepcopy(CC_SCENARIO)


@pytest.fixture
def write_scenario(tmp_path):
    """Dump a scenario dict to YAML and return the path."""
    def write(data: dict, name: str = "scenario.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False))
        return path
    return write


@pytest.fixture
def random_hermitian(rng):
    """Draw dense Hermitian matrices from the shared generator."""
    def draw(dim: int) -> np.ndarray:
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return 0.5 * (a + a.conj().T)
    return draw
