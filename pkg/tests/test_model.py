# pylint: disable=missing-docstring, protected-access
# type: ignore

import math
import unittest

import numpy as np

from mss_memristor.errors import MssModelError
from mss_memristor.model import (
    MssParams,
    DiodeParams,
    DeviceState,
    logistic_gamma,
    transition_probabilities,
    schottky_current,
    is_saturated,
    device_conductance,
    step_stochastic,
    step_expected,
    total_current,
    get_preset,
    preset_names,
)
from mss_memristor.model.device import FLOAT_MAX, schottky_current_array, mean_field_trajectory
from mss_memristor.model.device import transition_probability_arrays
from mss_memristor.stochastics import make_stream
from .testing_utils import *

BETA_26MV = 1.0 / 0.026


class TestMssParams(unittest.TestCase):
    def test_derived_values(self):
        params = reference_params()

        self.assertAlmostEqual(params.beta, 38.68, places=2)
        self.assertAlmostEqual(params.thermal_voltage, 0.02585, places=5)
        self.assertAlmostEqual(params.g_a, 2.125e-6, delta=1e-18)
        self.assertAlmostEqual(params.g_b, 0.67e-6, delta=1e-18)
        self.assertEqual(params.conductance_range, (0.67e-3, 2.125e-3))

    def test_conductance_ordering_is_free(self):
        params = reference_params(g_a_total=0.5e-3, g_b_total=3e-3)

        self.assertEqual(params.conductance_range, (0.5e-3, 3e-3))

    def test_invalid_parameters(self):
        invalid = [
            {"n_switches": 0},
            {"n_switches": 2.5},
            {"n_switches": True},
            {"t_c": 0.0},
            {"g_a_total": -1e-3},
            {"g_b_total": 0.0},
            {"phi": 1.5},
            {"phi": -0.1},
            {"temperature": 0.0},
        ]

        for values in invalid:
            with self.assertRaises(MssModelError) as context:
                reference_params(**values)
            self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.PARAMETER, values)

    def test_non_finite_parameters(self):
        for name in ("t_c", "v_a", "v_b", "phi"):
            with self.assertRaises(MssModelError) as context:
                reference_params(**{name: math.nan})
            self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.DOMAIN)
            self.assertEqual(context.exception.error_data["name"], name)

    def test_diode_coefficients_must_be_non_negative(self):
        for name in ("alpha_f", "beta_f", "alpha_r", "beta_r"):
            with self.assertRaises(MssModelError):
                DiodeParams(**{name: -1.0})

        self.assertFalse(DiodeParams().is_active)
        self.assertTrue(REFERENCE_DIODE.is_active)
        self.assertFalse(DiodeParams(alpha_f=1e-5).is_active)

    def test_named_values(self):
        params = get_preset("chalcogenide-diode")

        self.assertEqual(params.get_value("diode.beta_f"), 6.0)
        self.assertEqual(params.get_value("phi"), 0.45)

        changed = params.with_named_values({"diode.alpha_r": 1e-6, "v_a": 0.3})

        self.assertEqual(changed.diode.alpha_r, 1e-6)
        self.assertEqual(changed.diode.alpha_f, 5e-5)
        self.assertEqual(changed.v_a, 0.3)
        self.assertEqual(params.v_a, 0.27)

        flat = changed.to_dict()
        self.assertEqual(flat["diode.alpha_r"], 1e-6)
        self.assertEqual(flat["n_switches"], 1000)
        self.assertNotIn("diode", flat)


class TestPresets(unittest.TestCase):
    def test_reference_regimes(self):
        self.assertEqual(preset_names(), ["chalcogenide", "chalcogenide-sparse", "chalcogenide-diode"])

        top = get_preset("chalcogenide")
        self.assertEqual((top.n_switches, top.t_c, top.phi), (1000, 1e-4, 1.0))
        self.assertEqual((top.g_a_total, top.g_b_total, top.v_a, top.v_b), (2.125e-3, 0.67e-3, 0.27, 0.37))

        self.assertEqual(get_preset("chalcogenide-sparse").n_switches, 10)

        bottom = get_preset("chalcogenide-diode")
        self.assertEqual(bottom.phi, 0.45)
        self.assertEqual(bottom.diode, REFERENCE_DIODE)

    def test_unknown_preset(self):
        with self.assertRaises(MssModelError) as context:
            get_preset("tantalum")

        self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.PARAMETER)


class TestLogisticGamma(unittest.TestCase):
    def test_midpoint(self):
        self.assertEqual(logistic_gamma(0.27, 0.27, BETA_26MV), 0.5)

    def test_below_threshold(self):
        self.assertAlmostEqual(logistic_gamma(0.0, 0.27, BETA_26MV), 0.99996916, places=7)

    def test_saturation(self):
        self.assertEqual(logistic_gamma(1e6, 0.27, BETA_26MV), 0.0)
        self.assertEqual(logistic_gamma(-1e6, 0.27, BETA_26MV), 1.0)
        # |beta * (v - v_th)| well beyond the exp overflow limit.
        self.assertEqual(logistic_gamma(30.0, 0.0, 100.0), 0.0)
        self.assertEqual(logistic_gamma(-30.0, 0.0, 100.0), 1.0)

    def test_domain_errors(self):
        invalid = [(math.nan, 0.27, BETA_26MV), (0.0, math.inf, BETA_26MV), (0.0, 0.27, 0.0), (0.0, 0.27, -1.0)]

        for v, v_th, beta in invalid:
            with self.assertRaises(MssModelError) as context:
                logistic_gamma(v, v_th, beta)
            self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.DOMAIN)


class TestTransitionProbabilities(unittest.TestCase):
    def setUp(self):
        self.params = reference_params()
        self.dt = self.params.t_c / 100

    def test_positive_saturation(self):
        probabilities = transition_probabilities(1.0, self.params, self.dt)

        self.assertAlmostEqual(probabilities.alpha, 0.01, places=15)
        self.assertLess(probabilities.p_a, 1e-9)
        self.assertAlmostEqual(probabilities.p_b, probabilities.alpha, places=15)
        self.assertAlmostEqual(probabilities.beta, self.params.beta, places=12)

    def test_thresholds_are_midpoints(self):
        at_v_a = transition_probabilities(self.params.v_a, self.params, self.dt)
        at_minus_v_b = transition_probabilities(-self.params.v_b, self.params, self.dt)

        self.assertEqual(at_v_a.p_a, at_v_a.alpha / 2)
        self.assertEqual(at_minus_v_b.p_b, at_minus_v_b.alpha / 2)

    def test_limits(self):
        high = transition_probabilities(50.0, self.params, self.dt)
        low = transition_probabilities(-50.0, self.params, self.dt)

        self.assertEqual(high.p_a, 0.0)
        self.assertEqual(high.p_b, high.alpha)
        self.assertEqual(low.p_a, low.alpha)
        self.assertEqual(low.p_b, 0.0)

    def test_time_step_must_not_exceed_t_c(self):
        for dt in (0.0, -1e-6, 2 * self.params.t_c, math.nan):
            with self.assertRaises(MssModelError) as context:
                transition_probabilities(0.1, self.params, dt)
            self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.PARAMETER)

        full = transition_probabilities(-1.0, self.params, self.params.t_c)
        self.assertEqual(full.alpha, 1.0)

    def test_arrays_match_scalar_values(self):
        v = np.linspace(-1.0, 1.0, 41)
        p_a, p_b = transition_probability_arrays(v, self.params, self.dt)

        for index, value in enumerate(v):
            scalar = transition_probabilities(float(value), self.params, self.dt)
            self.assertAlmostEqual(p_a[index], scalar.p_a, delta=1e-17)
            self.assertAlmostEqual(p_b[index], scalar.p_b, delta=1e-17)


class TestSchottkyCurrent(unittest.TestCase):
    def test_zero_voltage(self):
        diode = DiodeParams(alpha_f=2e-5, beta_f=3.0, alpha_r=5e-6, beta_r=4.0)

        self.assertAlmostEqual(schottky_current(0.0, diode), 1.5e-5, delta=1e-20)

    def test_reference_diode(self):
        self.assertAlmostEqual(schottky_current(0.5, REFERENCE_DIODE), 1.0018e-3, delta=1e-7)
        self.assertAlmostEqual(schottky_current(-0.5, REFERENCE_DIODE), -1.0018e-3, delta=1e-7)

    def test_disabled_branch(self):
        for v in (-3.0, 0.0, 0.7, 100.0):
            self.assertEqual(schottky_current(v, DiodeParams()), 0.0)

    def test_overflow_saturates(self):
        forward = DiodeParams(alpha_f=1.0, beta_f=1000.0)
        reverse = DiodeParams(alpha_r=1.0, beta_r=1000.0)

        self.assertEqual(schottky_current(1.0, forward), FLOAT_MAX)
        self.assertEqual(schottky_current(-1.0, reverse), -FLOAT_MAX)
        self.assertTrue(is_saturated(schottky_current(1.0, forward)))
        self.assertFalse(is_saturated(schottky_current(0.5, REFERENCE_DIODE)))

        saturated = schottky_current_array(np.array([-1.0, 1.0]), DiodeParams(1.0, 1000.0, 1.0, 1000.0))
        np.testing.assert_array_equal(saturated, [-FLOAT_MAX, FLOAT_MAX])

    def test_monotone(self):
        v = np.linspace(-2.0, 2.0, 10 ** 4)
        currents = schottky_current_array(v, REFERENCE_DIODE)

        self.assertTrue(np.all(np.diff(currents) >= 0.0))
        for index in (0, 2500, 5000, 9999):
            scalar = schottky_current(float(v[index]), REFERENCE_DIODE)
            self.assertAlmostEqual(currents[index], scalar, delta=1e-12 * max(1.0, abs(scalar)))


class TestDeviceConductance(unittest.TestCase):
    def setUp(self):
        self.params = reference_params()

    def test_pure_states(self):
        self.assertEqual(DeviceState.from_populations(1000, self.params).g_m, 2.125e-3)
        self.assertEqual(DeviceState.from_populations(0, self.params).g_m, 0.67e-3)

    def test_mixed_populations(self):
        state = DeviceState.from_populations(400, self.params)

        self.assertEqual((state.n_a, state.n_b), (400, 600))
        self.assertAlmostEqual(device_conductance(state, self.params), 1.252e-3, delta=1e-15)

    def test_state_violation(self):
        for n_a, n_b in ((500, 400), (-1, 1001), (1001.0, -1.0)):
            with self.assertRaises(MssModelError) as context:
                device_conductance(DeviceState(n_a, n_b, 0.0), self.params)
            self.assertEqual(context.exception.error_kind, MssModelError.ErrorKind.STATE)

    def test_initial_state(self):
        state = DeviceState.initial(self.params, 0.25)
        fractional = DeviceState.initial(get_preset("chalcogenide-sparse"), 0.25, fractional=True)

        self.assertEqual((state.n_a, state.n_b), (250, 750))
        self.assertFalse(state.is_fractional)
        self.assertEqual((fractional.n_a, fractional.n_b), (2.5, 7.5))
        self.assertTrue(fractional.is_fractional)

        with self.assertRaises(MssModelError):
            DeviceState.initial(self.params, 1.5)


class TestStepStochastic(unittest.TestCase):
    def setUp(self):
        self.params = reference_params()
        self.dt = 1e-6

    def test_no_transitions(self):
        # At 1 K both logistic terms underflow to exactly zero at 0 V.
        params = reference_params(v_a=-1.0, v_b=-1.0, temperature=1.0)
        probabilities = transition_probabilities(0.0, params, self.dt)
        self.assertLess(max(probabilities.p_a, probabilities.p_b), 1e-300)

        state = DeviceState.initial(params)
        new_state, delta_g = step_stochastic(state, 0.0, self.dt, params, make_stream(1))

        self.assertEqual(new_state, state)
        self.assertEqual(delta_g, 0.0)

    def test_empty_source_population(self):
        state = DeviceState.from_populations(1000, self.params)
        stream = make_stream(5)

        for _ in range(50):
            state, _ = step_stochastic(state, -1.0, self.dt, self.params, stream)
            self.assertEqual(state.n_a, 1000)
            self.assertEqual(state.n_b, 0)

    def test_delta_g_is_exact_difference(self):
        state = DeviceState.initial(self.params)
        stream = make_stream(11)

        for k in range(200):
            new_state, delta_g = step_stochastic(state, 0.5 * math.sin(k / 20), self.dt, self.params, stream)
            self.assertEqual(delta_g, new_state.g_m - state.g_m)
            state = new_state

    def test_seed_average_follows_mean_field(self):
        n_seeds = 100
        n_steps = 1000
        n_switches = self.params.n_switches
        _, v = sine_record(n_steps, self.dt)
        initial = DeviceState.initial(self.params)

        p_a, p_b = transition_probability_arrays(v, self.params, self.dt)
        expected_n_a, _ = mean_field_trajectory(p_a, p_b, self.params, float(initial.n_a))

        n_a = np.empty((n_seeds, n_steps))
        for seed in range(n_seeds):
            state = initial
            stream = make_stream(seed)
            for index, value in enumerate(v.tolist()):
                state, _ = step_stochastic(state, value, self.dt, self.params, stream)
                n_a[seed, index] = state.n_a

        fraction = expected_n_a / n_switches
        standard_error = np.sqrt(n_switches * fraction * (1.0 - fraction) / n_seeds)
        deviation = np.abs(n_a.mean(axis=0) - expected_n_a)
        self.assertTrue(np.all(deviation <= 4.0 * standard_error), np.max(deviation / standard_error))


class TestStepExpected(unittest.TestCase):
    def setUp(self):
        self.params = reference_params()
        self.dt = self.params.t_c / 100

    def test_detailed_balance(self):
        # Symmetric thresholds give p_a == p_b at 0 V.
        params = reference_params(v_a=0.3, v_b=0.3)
        state = DeviceState.initial(params, fractional=True)

        new_state, delta_g = step_expected(state, 0.0, self.dt, params)

        self.assertEqual(new_state.n_a, 500.0)
        self.assertEqual(delta_g, 0.0)

    def test_fixed_point(self):
        v = 0.1
        probabilities = transition_probabilities(v, self.params, self.dt)
        fixed_point = 1000 * probabilities.p_a / (probabilities.p_a + probabilities.p_b)
        state = DeviceState.initial(self.params, fractional=True)

        for _ in range(5000):
            state, _ = step_expected(state, v, self.dt, self.params)

        self.assertAlmostEqual(state.n_a, fixed_point, delta=1e-9)
        self.assertAlmostEqual(state.n_a + state.n_b, 1000.0, delta=1e-9)

    def test_single_outflow(self):
        state = DeviceState.from_populations(1000, self.params, fractional=True)

        new_state, _ = step_expected(state, 5.0, self.dt, self.params)

        self.assertAlmostEqual(new_state.n_a, 1000 * (1 - self.dt / self.params.t_c), delta=1e-9)

    def test_trajectory_matches_steps(self):
        t, v = sine_record(500, self.dt)
        p_a, p_b = transition_probability_arrays(v, self.params, self.dt)
        populations, conductance = mean_field_trajectory(p_a, p_b, self.params, 500.0)

        state = DeviceState.initial(self.params, fractional=True)
        for index, value in enumerate(v):
            state, _ = step_expected(state, float(value), self.dt, self.params)
            self.assertAlmostEqual(populations[index], state.n_a, delta=1e-9)
            self.assertAlmostEqual(conductance[index], state.g_m, delta=1e-15)
        self.assertEqual(len(t), 500)


class TestTotalCurrent(unittest.TestCase):
    def test_memory_branch_only(self):
        params = reference_params()
        state = DeviceState.from_populations(400, params)

        self.assertEqual(total_current(0.3, state, 0.0, params), 0.3 * state.g_m)
        self.assertEqual(total_current(0.0, state, 0.0, params), 0.0)

    def test_diode_blend(self):
        params = get_preset("chalcogenide-diode")
        state = DeviceState(0.0, 1000.0, 1e-3)

        self.assertAlmostEqual(total_current(0.5, state, 0.0, params), 7.760e-4, delta=1e-7)

    def test_diode_adds_current(self):
        state = DeviceState.initial(reference_params())
        memory_only = total_current(0.5, state, 0.0, get_preset("chalcogenide"))
        blended = total_current(0.5, state, 0.0, get_preset("chalcogenide-diode"))

        self.assertGreater(blended, memory_only)

    def test_non_finite_input(self):
        params = reference_params()
        state = DeviceState.initial(params)

        with self.assertRaises(MssModelError):
            total_current(math.inf, state, 0.0, params)
        with self.assertRaises(MssModelError):
            total_current(0.1, state, math.nan, params)


class TestModelProperties(unittest.TestCase):
    def test_randomized_parameter_sets(self):
        generator = np.random.default_rng(2024)

        for index in range(1000):
            n_switches = int(generator.integers(1, 5000))
            t_c = float(10 ** generator.uniform(-6, -3))
            params = MssParams(
                n_switches=n_switches,
                t_c=t_c,
                g_a_total=float(10 ** generator.uniform(-5, -2)),
                g_b_total=float(10 ** generator.uniform(-5, -2)),
                v_a=float(generator.uniform(0.05, 0.8)),
                v_b=float(generator.uniform(0.05, 0.8)),
            )
            dt = t_c * float(generator.uniform(0.01, 1.0))
            alpha = dt / t_c
            lower, upper = params.conductance_range
            stream = make_stream(index)
            state = DeviceState.initial(params, float(generator.uniform()))
            expected = DeviceState.initial(params, 0.5, fractional=True)

            for v in generator.uniform(-1.5, 1.5, size=10):
                probabilities = transition_probabilities(float(v), params, dt)
                self.assertTrue(0.0 <= probabilities.p_a <= alpha)
                self.assertTrue(0.0 <= probabilities.p_b <= alpha)

                state, _ = step_stochastic(state, float(v), dt, params, stream)
                expected, _ = step_expected(expected, float(v), dt, params)
                self.assertEqual(state.n_a + state.n_b, n_switches)
                self.assertTrue(0 <= state.n_a <= n_switches)
                self.assertTrue(lower <= state.g_m <= upper)
                self.assertTrue(0.0 <= expected.n_a <= n_switches)
                self.assertTrue(lower <= expected.g_m <= upper)

    def test_incremental_consistency(self):
        params = reference_params()
        state = DeviceState.initial(params)
        initial_g = state.g_m
        stream = make_stream(3)
        total_delta = 0.0

        t, v = sine_record(10 ** 4, 1e-6)
        for value in v:
            state, delta_g = step_stochastic(state, float(value), 1e-6, params, stream)
            total_delta += delta_g

        self.assertEqual(len(t), 10 ** 4)
        self.assertLessEqual(abs(total_delta - (state.g_m - initial_g)), 1e-12)
        self.assertAlmostEqual(state.g_m, device_conductance(state, params), delta=1e-18)


if __name__ == "__main__":
    unittest.main()
