"""End-to-end studies on the shipped scenarios.

These runs take minutes to hours and are deselected by default; run them with
``pytest -m slow``.
"""

import numpy as np
import pytest

from src.config import PROJECT_ROOT
from src.models.output import Variant
from src.models.scenario import ScenarioConfig
from src.services.scenario_service import ScenarioService
from src.services.validation import load_scenario

pytestmark = pytest.mark.slow

SCENARIOS = PROJECT_ROOT / "config" / "scenarios"


def _with_values(config: ScenarioConfig, values: list[float]) -> ScenarioConfig:
    return config.model_copy(update={"sweep": config.sweep.model_copy(update={"values": values})})


def _rows(record, variant: Variant) -> list:
    return [p for p in record.points if p.variant == variant]


@pytest.fixture(scope="module")
def service():
    return ScenarioService()


@pytest.mark.parametrize("ej_over_ec", [0.03, 0.05])
def test_jj_optimized_gate(service, ej_over_ec):
    config = _with_values(load_scenario(SCENARIOS / "jj_leakage.yaml"), [ej_over_ec])
    record = service.run_scenario(config)
    assert record.complete
    optimized = _rows(record, Variant.OPTIMIZED)[0]
    baseline = _rows(record, Variant.BASELINE)[0]
    assert optimized.epsilon <= 1e-3
    assert optimized.epsilon * 10 <= baseline.epsilon
    history = np.array(next(iter(record.error_histories.values())))
    assert np.all(np.diff(history) <= 1e-10)


def test_jj_random_initial_guesses_agree(service):
    config = _with_values(load_scenario(SCENARIOS / "jj_leakage.yaml"), [0.05])
    errors = []
    for seed in (101, 202):
        krotov = config.krotov.model_copy(update={"guess_spread": 0.2})
        record = service.run_scenario(config.model_copy(update={"seed": seed, "krotov": krotov}))
        assert record.complete
        errors.append(_rows(record, Variant.OPTIMIZED)[0].epsilon)
    assert max(errors) <= 10 * min(errors)


def test_cc_optimized_gate(service):
    config = _with_values(load_scenario(SCENARIOS / "cc_leakage.yaml"), [0.47])
    record = service.run_scenario(config)
    assert record.complete
    optimized = _rows(record, Variant.OPTIMIZED)[0]
    assert optimized.marked
    assert optimized.epsilon <= 5e-3
    assert optimized.epsilon < _rows(record, Variant.BASELINE)[0].epsilon


def test_jj_leakage_sweep_ordering(service):
    record = service.run_scenario(load_scenario(SCENARIOS / "jj_leakage.yaml"), threads=4)
    assert record.complete
    for baseline, optimized in zip(_rows(record, Variant.BASELINE), _rows(record, Variant.OPTIMIZED)):
        assert baseline.axis_value == optimized.axis_value
        assert optimized.epsilon * 10 <= baseline.epsilon


@pytest.mark.parametrize("name", ["jj_filter.yaml", "cc_filter.yaml"])
def test_filter_study_shape(service, name):
    record = service.run_scenario(load_scenario(SCENARIOS / name), threads=4)
    assert record.complete
    filtered = _rows(record, Variant.FILTERED)
    unfiltered = _rows(record, Variant.UNFILTERED)[0]
    assert filtered[-1].epsilon == pytest.approx(unfiltered.epsilon, abs=1e-10)
    for row in filtered:
        if row.axis_value >= 10:
            assert row.epsilon <= 2 * unfiltered.epsilon


def test_jj_noise_robustness(service):
    record = service.run_scenario(load_scenario(SCENARIOS / "jj_noise.yaml"), threads=4)
    assert record.complete
    noiseless = _rows(record, Variant.OPTIMIZED_NOISELESS)[0].epsilon
    baseline = {p.axis_value: p for p in _rows(record, Variant.BASELINE) if p.axis == "amplitude"}
    optimized = {p.axis_value: p for p in _rows(record, Variant.OPTIMIZED) if p.axis == "amplitude"}
    assert optimized[1.0e-5].epsilon <= 10 * noiseless
    for A, row in optimized.items():
        assert row.stderr is not None
        assert row.epsilon < baseline[A].epsilon
