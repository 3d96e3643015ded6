"""Tests for the Krotov optimizer.

Tests cover:
- weight_shape: pinned endpoints, sin2 and flat_top profiles
- ControlProblem: pinning, tying, missing fields, idle values of unoptimized controls
- krotov_optimize: monotonic decrease on both presets, the per-state functional,
  termination reasons, non-negative Josephson samples, non-finite updates,
  epsilon_min reproduced by propagating the final pulses
"""

import numpy as np
import pytest

from src.control.krotov import (
    ControlChannel,
    functional_value,
    gate_epsilon,
    krotov_optimize,
    weight_shape,
)
from src.errors import InputError, NumericalError
from src.models.output import TerminatedBy
from src.models.scenario import Functional, KrotovConfig, PulseShape
from src.models.system import CONTROL_INDEX, ControlId
from src.physics.dynamics import TimeGrid, propagate
from src.schemes.capacitive import CapacitiveScheme, experimental_cc_params
from src.schemes.josephson import JosephsonScheme, jj_params
from src.utils.metrics import evaluate_propagator


def _setup(scheme, params, n_steps=100):
    model = scheme.system_model(params)
    grid = scheme.grid(params, n_steps)
    problem = scheme.control_problem(model, grid)
    init = scheme.initial_guess(params, grid, problem)
    return problem, init, scheme.target(params)


@pytest.fixture
def jj_problem():
    return _setup(JosephsonScheme(), jj_params(window=(0, 1)))


@pytest.fixture
def cc_problem():
    return _setup(CapacitiveScheme(), experimental_cc_params(window=(-1, 2)))


# ---------------------------------------------------------------------------
# Update weights
# ---------------------------------------------------------------------------


class TestWeightShape:
    def test_sin2_pins_endpoints(self):
        s = weight_shape(KrotovConfig(), TimeGrid(10.0, 100))
        assert s[0] == 0.0 and s[-1] == 0.0
        assert np.all((s >= 0.0) & (s <= 1.0))
        np.testing.assert_allclose(s[1:-1], s[1:-1][::-1], atol=1e-12)

    def test_flat_top_plateau(self):
        cfg = KrotovConfig(shape=PulseShape.FLAT_TOP, ramp_fraction=0.2)
        grid = TimeGrid(10.0, 100)
        s = weight_shape(cfg, grid)
        assert s[0] == 0.0 and s[-1] == 0.0
        middle = (grid.t_mid > 2.0) & (grid.t_mid < 8.0)
        np.testing.assert_array_equal(s[middle], 1.0)
        assert np.all(s[~middle] < 1.0)


# ---------------------------------------------------------------------------
# Control problem
# ---------------------------------------------------------------------------


class TestCheckPulses:
    def test_initial_guess_passes(self, jj_problem, cc_problem):
        for problem, init, _ in (jj_problem, cc_problem):
            problem.check_pulses(init)

    def test_unpinned_endpoint(self, cc_problem):
        problem, init, _ = cc_problem
        samples = init.fields[ControlId.NG2].copy()
        samples[-1] += 0.01
        with pytest.raises(InputError, match="NG2"):
            problem.check_pulses(init.with_fields({ControlId.NG2: samples}))

    def test_tied_fields_must_agree(self, jj_problem):
        problem, init, _ = jj_problem
        samples = init.fields[ControlId.EJJ].copy()
        samples[5] *= 1.1
        with pytest.raises(InputError, match="Tied"):
            problem.check_pulses(init.with_fields({ControlId.EJJ: samples}))

    def test_missing_field(self, jj_problem):
        problem, init, _ = jj_problem
        fields = {c: s for c, s in init.fields.items() if c != ControlId.EJ2}
        with pytest.raises(InputError, match="EJ2"):
            problem.check_pulses(type(init)(grid=init.grid, fields=fields))

    def test_tied_channel_derivative_sums_targets(self, jj_problem):
        problem, init, _ = jj_problem
        values = problem.values_matrix(init)[3]
        channel = problem.channels[0]
        expected = sum(problem.system.derivative(c, values) for c in channel.targets)
        np.testing.assert_allclose(problem.derivative(channel, values), expected)

    def test_unoptimized_controls_stay_at_idle(self, jj_problem, cc_problem):
        for problem, init, _ in (jj_problem, cc_problem):
            values = problem.values_matrix(init)
            idle = problem.system.idle_values()
            optimized = {CONTROL_INDEX[c] for ch in problem.channels for c in ch.targets}
            for column in set(range(len(idle))) - optimized:
                np.testing.assert_array_equal(values[:, column], idle[column])

    def test_josephson_channel_is_non_negative(self):
        channel = ControlChannel(name="EJ", targets=(ControlId.EJ1, ControlId.EJJ), boundary=(0.1, 0.1))
        assert channel.non_negative
        assert not ControlChannel(name="NG1", targets=(ControlId.NG1,), boundary=(0.2, 0.2)).non_negative


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------


class TestKrotovOptimize:
    @pytest.mark.parametrize("preset", ["jj_problem", "cc_problem"])
    def test_monotonic_decrease(self, preset, request):
        problem, init, target = request.getfixturevalue(preset)
        cfg = KrotovConfig(lambda0=1000.0, max_iters=5, target_error=1e-12)
        result = krotov_optimize(problem, init, target, cfg)
        history = result.error_history
        assert len(history) == result.iterations_run + 1
        assert np.all(np.diff(history) <= 1e-10)
        assert history[-1] < history[0]
        assert result.monotonicity_violations == 0

    @pytest.mark.parametrize("preset", ["jj_problem", "cc_problem"])
    def test_per_state_functional_increases(self, preset, request):
        problem, init, target = request.getfixturevalue(preset)
        cfg = KrotovConfig(lambda0=1000.0, max_iters=3, target_error=1e-12, functional=Functional.PER_STATE)
        result = krotov_optimize(problem, init, target, cfg)
        T = target.target_states
        before = propagate(init, problem.system).U @ target.embedding
        after = propagate(result.final_pulses, problem.system).U @ target.embedding
        assert functional_value(T, after, Functional.PER_STATE) > functional_value(T, before, Functional.PER_STATE)

    def test_history_starts_at_initial_error(self, cc_problem):
        problem, init, target = cc_problem
        cfg = KrotovConfig(lambda0=1000.0, max_iters=1, target_error=1e-12)
        result = krotov_optimize(problem, init, target, cfg)
        U = propagate(init, problem.system).U
        assert result.error_history[0] == pytest.approx(evaluate_propagator(U, target).epsilon, abs=1e-12)

    def test_final_pulses_keep_boundary_and_ties(self, jj_problem):
        problem, init, target = jj_problem
        cfg = KrotovConfig(lambda0=1000.0, max_iters=3, target_error=1e-12)
        result = krotov_optimize(problem, init, target, cfg)
        problem.check_pulses(result.final_pulses)
        assert np.all(result.final_pulses.fields[ControlId.EJ1] >= 0.0)
        assert not np.array_equal(result.final_pulses.fields[ControlId.EJ1], init.fields[ControlId.EJ1])

    @pytest.mark.parametrize("preset", ["jj_problem", "cc_problem"])
    def test_final_pulses_reproduce_epsilon_min(self, preset, request):
        problem, init, target = request.getfixturevalue(preset)
        cfg = KrotovConfig(lambda0=1000.0, max_iters=4, target_error=1e-12)
        result = krotov_optimize(problem, init, target, cfg)
        U = propagate(result.final_pulses, problem.system).U
        assert evaluate_propagator(U, target).epsilon == pytest.approx(result.epsilon_min, abs=1e-12)

    def test_max_iters(self, jj_problem):
        problem, init, target = jj_problem
        result = krotov_optimize(problem, init, target, KrotovConfig(max_iters=3, target_error=1e-12))
        assert result.terminated_by == TerminatedBy.MAX_ITERS
        assert result.iterations_run == 3

    def test_target_reached_before_first_iteration(self, jj_problem):
        problem, init, target = jj_problem
        result = krotov_optimize(problem, init, target, KrotovConfig(target_error=0.999))
        assert result.terminated_by == TerminatedBy.TARGET_REACHED
        assert result.iterations_run == 0
        assert len(result.error_history) == 1

    def test_stalled(self, jj_problem):
        problem, init, target = jj_problem
        cfg = KrotovConfig(lambda0=1000.0, max_iters=50, target_error=1e-12, stall_tolerance=1.0, stall_window=2)
        result = krotov_optimize(problem, init, target, cfg)
        assert result.terminated_by == TerminatedBy.STALLED
        assert result.iterations_run == 2

    def test_zero_iterations(self, cc_problem):
        problem, init, target = cc_problem
        result = krotov_optimize(problem, init, target, KrotovConfig(max_iters=0, target_error=1e-12))
        assert result.iterations_run == 0
        for cid, samples in init.fields.items():
            np.testing.assert_array_equal(result.final_pulses.fields[cid], samples)

    def test_non_finite_update(self, cc_problem):
        problem, init, target = cc_problem
        cfg = KrotovConfig(lambda0=5e-324, max_iters=2, target_error=1e-12)
        with pytest.raises(NumericalError, match="iteration 1"):
            krotov_optimize(problem, init, target, cfg)

    def test_dimension_mismatch(self, jj_problem):
        problem, init, _ = jj_problem
        wrong = JosephsonScheme().target(jj_params(window=(-1, 2)))
        with pytest.raises(InputError):
            krotov_optimize(problem, init, wrong, KrotovConfig())


class TestFunctional:
    def test_perfect_overlap(self, cc_problem):
        _, _, target = cc_problem
        T = target.target_states
        assert gate_epsilon(T, T) == pytest.approx(0.0, abs=1e-15)
        for functional in Functional:
            assert functional_value(T, T, functional) == pytest.approx(1.0)

    def test_global_phase(self, cc_problem):
        _, _, target = cc_problem
        T = target.target_states
        assert gate_epsilon(T, np.exp(1.1j) * T) == pytest.approx(0.0, abs=1e-15)
