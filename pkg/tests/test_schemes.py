"""Tests for the Josephson and capacitive coupling presets.

Tests cover:
- analytic gate times and preset parameters
- at_sweep_point for both leakage axes
- baseline pulses, initial guesses, seeded randomized guesses and control channels
- energy_scale invariance and system_params from config sections
"""

from dataclasses import replace

import numpy as np
import pytest

from src.models.scenario import SystemSettings
from src.models.system import ControlId, CouplingKind, CouplingSpec, GateKind
from src.schemes.base import energy_scale
from src.schemes.capacitive import (
    CapacitiveScheme,
    baseline_cc_gate,
    experimental_cc_params,
    resonant_ng2,
    tau_cc,
)
from src.schemes.josephson import JosephsonScheme, baseline_jj_gate, jj_params, tau_jj
from src.utils.seeding import stream


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------


class TestPresets:
    def test_gate_times(self):
        assert tau_jj(0.05) == pytest.approx(0.97 * 2 * np.pi / 0.05)
        assert tau_cc(0.0777) == pytest.approx(1.18 * np.pi / 0.0777)
        assert JosephsonScheme().gate_time(jj_params(0.05)) == pytest.approx(tau_jj(0.05))
        assert CapacitiveScheme().gate_time(experimental_cc_params()) == pytest.approx(tau_cc(0.0777))

    def test_jj_params(self):
        params = jj_params(ej_over_ec=0.03)
        assert params.qubit1 == params.qubit2
        assert params.qubit1.E_J_idle == pytest.approx(0.03)
        assert params.coupling.E_JJ_idle == pytest.approx(0.03)
        assert params.coupling.E_cc == pytest.approx(0.05 * 0.03)
        assert params.qubit1.n_g_idle == 0.5

    def test_experimental_cc_params(self):
        params = experimental_cc_params()
        assert params.qubit2.E_C == pytest.approx(1.157)
        assert params.qubit2.E_J_idle / params.qubit2.E_C == pytest.approx(0.0610)
        assert params.coupling.kind == CouplingKind.CAPACITIVE
        assert params.coupling.E_JJ_idle == 0.0

    def test_resonant_ng2(self):
        params = experimental_cc_params()
        assert resonant_ng2(params) == pytest.approx(0.5 + 0.1653 * 0.75 / (2 * 1.157))


class TestSweepPoints:
    def test_josephson_axis(self):
        point = JosephsonScheme().at_sweep_point(jj_params(0.05), 0.02)
        assert point.qubit1.E_J_idle == pytest.approx(0.02)
        assert point.qubit2.E_J_idle == pytest.approx(0.02)
        assert point.coupling.E_JJ_idle == pytest.approx(0.02)
        assert point.coupling.E_cc == pytest.approx(0.05 * 0.02)

    def test_capacitive_axis_keeps_ratio(self):
        params = experimental_cc_params()
        point = CapacitiveScheme().at_sweep_point(params, 0.47)
        assert point.qubit1.E_J_idle == pytest.approx(0.47 * 0.1653)
        ratio = params.qubit2.E_J_idle / params.qubit1.E_J_idle
        assert point.qubit2.E_J_idle / point.qubit1.E_J_idle == pytest.approx(ratio)
        assert point.coupling == params.coupling


# ---------------------------------------------------------------------------
# Pulses and channels
# ---------------------------------------------------------------------------


class TestPulses:
    def test_jj_baseline_and_channel(self):
        scheme = JosephsonScheme()
        params = jj_params(0.05)
        grid = scheme.grid(params, 50)
        pulses = scheme.baseline_pulses(params, grid)
        assert set(pulses.controls) == {ControlId.EJ1, ControlId.EJ2, ControlId.EJJ}
        problem = scheme.control_problem(scheme.system_model(params), grid)
        assert [c.name for c in problem.channels] == ["EJ"]
        assert problem.channels[0].boundary == (0.05, 0.05)
        assert scheme.target(params).kind == GateKind.G_JJ_PLUS

    def test_cc_initial_guess_pins_endpoints(self):
        scheme = CapacitiveScheme()
        params = experimental_cc_params()
        grid = scheme.grid(params, 50)
        problem = scheme.control_problem(scheme.system_model(params), grid)
        guess = scheme.initial_guess(params, grid, problem)
        ng2 = guess.fields[ControlId.NG2]
        assert ng2[0] == 0.25 and ng2[-1] == 0.25
        np.testing.assert_allclose(ng2[1:-1], resonant_ng2(params))
        np.testing.assert_allclose(guess.fields[ControlId.NG1], 0.25)
        problem.check_pulses(guess)

    def test_cc_target(self):
        assert CapacitiveScheme().target(experimental_cc_params()).kind == GateKind.G_CC

    @pytest.mark.parametrize(
        "scheme, params",
        [(JosephsonScheme(), jj_params(0.05)), (CapacitiveScheme(), experimental_cc_params())],
        ids=["josephson", "capacitive"],
    )
    def test_randomized_guess(self, scheme, params):
        grid = scheme.grid(params, 200)
        problem = scheme.control_problem(scheme.system_model(params), grid)
        guess = scheme.initial_guess(params, grid, problem)
        a = scheme.randomized_guess(guess, problem, stream(7, "guess", "a"), 0.3)
        again = scheme.randomized_guess(guess, problem, stream(7, "guess", "a"), 0.3)
        b = scheme.randomized_guess(guess, problem, stream(7, "guess", "b"), 0.3)
        problem.check_pulses(a)
        for channel in problem.channels:
            samples = a.fields[channel.targets[0]]
            base = guess.fields[channel.targets[0]]
            np.testing.assert_array_equal(samples, again.fields[channel.targets[0]])
            assert not np.array_equal(samples, b.fields[channel.targets[0]])
            assert not np.array_equal(samples, base)
            if channel.non_negative:
                assert np.all(np.abs(samples / base - 1.0) <= 0.3 + 1e-12)
            else:
                assert np.max(np.abs(samples - base)) <= 0.3 + 1e-12


# ---------------------------------------------------------------------------
# Baseline gates
# ---------------------------------------------------------------------------


class TestBaselineGates:
    def test_errors_are_finite_and_bounded(self):
        for error in (baseline_jj_gate(jj_params(0.05), n_steps=100), baseline_cc_gate(n_steps=100)):
            assert 0.0 <= error.epsilon < 1.0
            assert len(error.leakage) == 4

    def test_constant_pulses_do_not_depend_on_grid(self):
        params = experimental_cc_params()
        coarse = baseline_cc_gate(params, n_steps=100).epsilon
        fine = baseline_cc_gate(params, n_steps=200).epsilon
        assert coarse == pytest.approx(fine, abs=1e-10)

    @pytest.mark.parametrize("ej_over_ec", [0.05, 0.1])
    def test_four_charge_states_are_sufficient(self, ej_over_ec):
        four = baseline_jj_gate(jj_params(ej_over_ec, window=(-1, 2)), n_steps=100).epsilon
        six = baseline_jj_gate(jj_params(ej_over_ec, window=(-2, 3)), n_steps=100).epsilon
        assert abs(four - six) < 1e-4

    def test_uncoupled_boxes_cannot_make_the_gate(self):
        params = experimental_cc_params()
        uncoupled = replace(params, coupling=CouplingSpec(kind=CouplingKind.CAPACITIVE, E_cc=0.0))
        assert baseline_cc_gate(uncoupled, n_steps=100).epsilon > 0.2

    @pytest.mark.parametrize(
        "scheme, params",
        [(JosephsonScheme(), jj_params(0.05)), (CapacitiveScheme(), experimental_cc_params())],
        ids=["josephson", "capacitive"],
    )
    def test_energy_scale_invariance(self, scheme, params):
        scaled = energy_scale(params, 2.0)
        assert scheme.gate_time(scaled) == pytest.approx(scheme.gate_time(params) / 2)
        original = scheme.baseline_error(params, n_steps=100).epsilon
        assert scheme.baseline_error(scaled, n_steps=100).epsilon == pytest.approx(original, abs=1e-10)


class TestSystemParams:
    def test_residual_ratio_sets_coulomb_term(self):
        settings = SystemSettings(
            qubit1={"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
            qubit2={"E_C": 1.0, "E_J_idle": 0.05, "n_g_idle": 0.5},
            coupling={"kind": "josephson", "E_cc": 0.9, "E_JJ_idle": 0.04, "residual_ratio": 0.1},
        )
        params = JosephsonScheme().system_params(settings)
        assert params.coupling.E_cc == pytest.approx(0.004)
        assert params.basis.D == 4

    def test_capacitive_ignores_residual_ratio(self):
        settings = SystemSettings(
            charge_window=(0, 1),
            qubit1={"E_C": 1.0, "E_J_idle": 0.0777, "n_g_idle": 0.25},
            qubit2={"E_C": 1.157, "E_J_idle": 0.0706, "n_g_idle": 0.25},
            coupling={"kind": "capacitive", "E_cc": 0.1653, "residual_ratio": 0.1},
        )
        params = CapacitiveScheme().system_params(settings)
        assert params.coupling.E_cc == pytest.approx(0.1653)
        assert params.basis.D == 2
