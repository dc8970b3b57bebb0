# pylint: disable=missing-docstring, protected-access
# type: ignore

import os
import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np

from mss_memristor.circuit import Resistor
from mss_memristor.drivers import Piecewise, Sine
from mss_memristor.fitting import FitProblem, InitialStatePolicy, LossKind, RandomSearch
from mss_memristor.formats import ConfigError, TraceFormatError
from mss_memristor.formats.config import ConfigOverrides, load_config, parse_config
from mss_memristor.formats.csv_io import read_measurement_csv, read_trace_csv, write_measurement_csv, write_trace_csv
from mss_memristor.formats.svg import write_iv_svg, write_overlay_svg
from mss_memristor.model import get_preset
from mss_memristor.simulation import SimulationMode
from mss_memristor.stochastics import SamplerMode
from mss_memristor.trace import MeasuredTrace, Trace
from .testing_utils import *

DEVICE_CONFIG = {
    "device": {"preset": "chalcogenide"},
    "drive": {"type": "sine", "amplitude": 0.5, "frequency": 500.0},
    "grid": {"dt": 1e-6, "n_steps": 100},
}


def _config(**sections):
    data = dict(DEVICE_CONFIG)
    data.update(sections)
    return data


def _sample_trace():
    return Trace(
        [0.0, 1e-6, 2e-6],
        [0.0, 0.1, 1 / 3],
        [0.0, 1.2345678901234567e-4, -2e-300],
        [1e-3, 1.1e-3, 1.2e-3],
        [500.0, 501.0, 499.0],
        metadata={"mode": "stochastic", "seed": "3", "drive": "{type: sine, amplitude: 0.5}"},
        element_voltages=np.array([[0.0, 0.0], [0.05, 0.05], [0.2, 1 / 3 - 0.2]]),
        saturated=True,
    )


class TestCsv(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp(prefix="mss_memristor_test_")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def _path(self, name):
        return os.path.join(self.temp_dir, name)

    def _measurement_error(self, text):
        with self.assertRaises(TraceFormatError) as context:
            read_measurement_csv(write_text(self._path("measured.csv"), text))
        return context.exception

    def test_trace_round_trip(self):
        trace = _sample_trace()
        path = self._path("trace.csv")

        write_trace_csv(trace, path)
        restored = read_trace_csv(path)

        for column in ("t", "v", "i", "g", "n_a", "element_voltages"):
            np.testing.assert_array_equal(getattr(restored, column), getattr(trace, column))
        self.assertEqual(restored.metadata, trace.metadata)
        self.assertTrue(restored.saturated)
        self.assertTrue(restored.integer_populations)

    def test_trace_layout(self):
        path = self._path("trace.csv")

        write_trace_csv(_sample_trace(), path)
        lines = read_text(path).splitlines()

        self.assertEqual(lines[0], "# mode: stochastic")
        self.assertEqual(lines[3], "# saturated: true")
        self.assertEqual(lines[4], "t,v,i,g,n_a,v_e0,v_e1")
        self.assertEqual(lines[5], "0,0,0,0.001,500,0,0")

    def test_measurement_round_trip(self):
        t, v = sine_record(20, 1e-6)
        measured = MeasuredTrace(t, v, 1e-3 * v, source="bench")
        path = self._path("measured.csv")

        write_measurement_csv(measured, path)
        restored = read_measurement_csv(path)

        np.testing.assert_array_equal(restored.t, measured.t)
        np.testing.assert_array_equal(restored.i, measured.i)
        self.assertEqual(restored.source, path)
        self.assertTrue(read_text(path).startswith("# source: bench\nt,v,i\n"))

    def test_extra_columns_are_ignored(self):
        rows = "".join(f"{k * 1e-6},{0.01 * k},{1e-5 * k},note{k}\n" for k in range(10))

        measured = read_measurement_csv(write_text(self._path("measured.csv"), "t,v,i,note\n" + rows))

        self.assertEqual(len(measured), 10)

    def test_header_only(self):
        error = self._measurement_error("t,v,i\n")

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.VALIDATION)

    def test_empty_file(self):
        error = self._measurement_error("# nothing here\n")

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.VALIDATION)

    def test_unparsable_value(self):
        error = self._measurement_error("t,v,i\n0.001,0.5,abc\n")

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.PARSE_ERROR)
        self.assertEqual(error.line, 2)
        self.assertEqual(error.kind_name, "parse_error")

    def test_invalid_utf8(self):
        path = write_bytes(self._path("measured.csv"), b"t,v,i\n0.0,0.1,0.2\n0.1,0.2,\xff\xfe\n")

        with self.assertRaises(TraceFormatError) as context:
            read_measurement_csv(path)

        self.assertEqual(context.exception.error_kind, TraceFormatError.ErrorKind.PARSE_ERROR)
        self.assertEqual(context.exception.line, 3)
        self.assertIn("UTF-8", str(context.exception))

    def test_wrong_field_count(self):
        error = self._measurement_error("# comment\nt,v,i\n\n0.0,0.1,0.2\n0.1,0.2\n")

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.PARSE_ERROR)
        self.assertEqual(error.line, 5)

    def test_missing_column(self):
        error = self._measurement_error("# source: bench\nt,v\n0.0,0.1\n")

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.PARSE_ERROR)
        self.assertEqual(error.line, 2)

    def test_non_monotone_time(self):
        rows = "".join(f"{t},0.1,0.2\n" for t in (0, 1, 2, 3, 4, 5, 5, 6, 7, 8))

        error = self._measurement_error("t,v,i\n" + rows)

        self.assertEqual(error.error_kind, TraceFormatError.ErrorKind.VALIDATION)
        self.assertEqual(error.kind_name, "validation")
        self.assertIsNone(error.line)


class TestSvg(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp(prefix="mss_memristor_test_")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_iv_plot(self):
        path = os.path.join(self.temp_dir, "trace.svg")
        trace = _sample_trace()
        trace.metadata["params"] = "{n_switches: 1000}"

        write_iv_svg(trace, path, "top <panel>")
        content = read_text(path)

        self.assertTrue(content.startswith('<svg xmlns="http://www.w3.org/2000/svg"'))
        self.assertIn("<title>top &lt;panel&gt;</title>", content)
        self.assertIn('<polyline class="curve0"', content)
        self.assertIn("params: {n_switches: 1000}", content)
        self.assertIn("mode: stochastic", content)
        self.assertIn("seed: 3", content)
        self.assertTrue(content.endswith("</svg>\n"))

    def test_overlay(self):
        path = os.path.join(self.temp_dir, "overlay.svg")
        t, v = sine_record(20, 1e-6)
        measured = MeasuredTrace(t, v, 1e-3 * v)
        model = Trace(t, v, 1.1e-3 * v, np.full(20, 1.1e-3), np.zeros(20))

        write_overlay_svg(measured, model, path, {"loss_value": "1e-06"})
        content = read_text(path)

        self.assertIn('<polyline class="curve0"', content)
        self.assertIn('<polyline class="curve1"', content)
        self.assertIn(">measured</text>", content)
        self.assertIn(">fitted model</text>", content)
        self.assertIn("loss_value: 1e-06", content)


class TestConfig(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp(prefix="mss_memristor_test_")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def _issue_paths(self, data):
        with self.assertRaises(ConfigError) as context:
            parse_config(data)
        return context.exception.paths

    def test_preset_device(self):
        config = parse_config(
            _config(simulation={"mode": "mean-field", "seed": 7, "sampler": "exact"}, outputs=[{"csv": "a.csv"}])
        )

        self.assertEqual(config.elements, (get_preset("chalcogenide"),))
        self.assertEqual(config.device, get_preset("chalcogenide"))
        self.assertEqual(config.drive, Sine(0.5, 500.0))
        self.assertEqual((config.grid.dt, config.grid.n_steps), (1e-6, 100))
        self.assertEqual(config.mode, SimulationMode.MEAN_FIELD)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.sampler, SamplerMode.EXACT_BINOMIAL)
        self.assertEqual(config.initial_fraction_a, 0.5)
        self.assertEqual(config.outputs[0].csv, Path("a.csv"))
        self.assertIsNone(config.outputs[0].svg)
        self.assertIsNone(config.fit)

    def test_defaults(self):
        data = {"device": {"preset": "chalcogenide-sparse"}, "drive": {"amplitude": 0.3, "frequency": 1e3}}

        config = parse_config(data)

        self.assertEqual(config.grid.dt, 1e-6)
        self.assertEqual(config.grid.n_steps, 4000)
        self.assertEqual(config.mode, SimulationMode.STOCHASTIC)
        self.assertEqual((config.seed, config.stream_id), (0, 0))
        self.assertEqual(config.device.n_switches, 10)

    def test_explicit_device(self):
        device = {
            "n_switches": 200,
            "t_c": 2e-4,
            "g_a_total": 3e-3,
            "g_b_total": 1e-3,
            "v_a": 0.2,
            "v_b": 0.3,
            "phi": 0.5,
            "diode": {"alpha_f": 1e-5, "beta_f": 4.0},
        }

        params = parse_config(_config(device=device)).device

        self.assertEqual(params.n_switches, 200)
        self.assertEqual(params.t_c, 2e-4)
        self.assertEqual(params.diode.alpha_f, 1e-5)
        self.assertEqual(params.diode.alpha_r, 0.0)

    def test_preset_with_overrides(self):
        device = {"preset": "chalcogenide-diode", "v_a": 0.3, "diode": {"beta_r": 5}}

        params = parse_config(_config(device=device)).device

        self.assertEqual(params.v_a, 0.3)
        self.assertEqual(params.phi, 0.45)
        self.assertEqual(params.diode.beta_r, 5.0)
        self.assertEqual(params.diode.beta_f, 6.0)

    def test_time_step_longer_than_t_c(self):
        self.assertEqual(self._issue_paths(_config(grid={"dt": 2e-4, "n_steps": 10})), ["grid.dt"])

    def test_every_issue_is_reported(self):
        data = _config(
            device={"preset": "chalcogenide", "phi": 1.5},
            drive={"type": "sine", "amplitude": 0.5, "frequency": -1.0},
            colour="blue",
        )

        self.assertEqual(sorted(self._issue_paths(data)), ["colour", "device.phi", "drive.frequency"])

    def test_field_errors(self):
        cases = [
            (_config(device={"preset": "graphene"}), "device.preset"),
            (_config(device={"preset": "chalcogenide", "voltage": 1}), "device.voltage"),
            (_config(device={"t_c": 1e-4}), "device.n_switches"),
            (_config(drive={"type": "square"}), "drive.type"),
            (_config(drive={"type": "piecewise", "points": [[0, 0], ["a", 1]]}), "drive.points[1]"),
            (_config(grid={"n_steps": 0}), "grid.n_steps"),
            (_config(simulation={"mode": "quantum"}), "simulation.mode"),
            (_config(simulation={"seed": -1}), "simulation.seed"),
            (_config(simulation={"seed": 2 ** 64}), "simulation.seed"),
            (_config(simulation={"initial_fraction_a": 1.5}), "simulation.initial_fraction_a"),
            (_config(outputs=[{"png": "a.png"}]), "outputs[0].png"),
            ({**DEVICE_CONFIG, "elements": [{"resistor": {"conductance": 1e-3}}]}, "device"),
        ]

        for data, path in cases:
            self.assertIn(path, self._issue_paths(data), data)

    def test_series_elements(self):
        data = {key: value for key, value in DEVICE_CONFIG.items() if key != "device"}
        data["elements"] = [{"device": {"preset": "chalcogenide"}}, {"resistor": {"conductance": 1e-3}}]

        config = parse_config(data)

        self.assertEqual(config.elements, (get_preset("chalcogenide"), Resistor(1e-3)))
        self.assertEqual(config.devices, [get_preset("chalcogenide")])

    def test_resistor_errors(self):
        data = {key: value for key, value in DEVICE_CONFIG.items() if key != "device"}
        data["elements"] = [{"device": {"preset": "chalcogenide"}}, {"resistor": {"conductance": -1}}]
        self.assertEqual(self._issue_paths(data), ["elements[1].resistor.conductance"])

        data["elements"] = [{"resistor": {"conductance": 1e-3}}]
        self.assertEqual(self._issue_paths(data), ["elements"])

    def test_piecewise_drive(self):
        drive = {"type": "piecewise", "points": [[0, 0], [1e-3, 0.5]], "interpolation": "hold"}

        config = parse_config(_config(drive=drive))

        self.assertEqual(config.drive, Piecewise(((0.0, 0.0), (1e-3, 0.5)), config.drive.interpolation))
        self.assertEqual(config.drive.interpolation.value, "hold")

    def test_overrides(self):
        overrides = ConfigOverrides(seed=11, mode="mean-field", dt=5e-7, steps=10, out_dir=Path("out"))

        config = parse_config(_config(simulation={"seed": 1}), overrides=overrides)

        self.assertEqual(config.seed, 11)
        self.assertEqual(config.mode, SimulationMode.MEAN_FIELD)
        self.assertEqual((config.grid.dt, config.grid.n_steps), (5e-7, 10))
        self.assertEqual(config.output_path(Path("a.csv")), Path("out") / "a.csv")
        self.assertEqual(config.output_path(Path("/tmp/a.csv")), Path("/tmp/a.csv"))

    def test_overridden_time_step_is_validated(self):
        with self.assertRaises(ConfigError) as context:
            parse_config(_config(), overrides=ConfigOverrides(dt=1e-3))

        self.assertEqual(context.exception.paths, ["grid.dt"])

    def test_fit_section(self):
        fit_section = {
            "measured": "measured.csv",
            "free": {"v_a": [0.05, 0.8], "v_b": ["5e-2", 0.8]},
            "loss": "normalized-rmse",
            "initial_state_policy": "fixed-fraction",
            "optimizer": {"type": "random-search", "budget": 5, "seed": 2},
        }

        config = parse_config(_config(fit=fit_section), base_dir=Path(self.temp_dir))
        settings = config.fit

        self.assertEqual(settings.measured, Path(self.temp_dir) / "measured.csv")
        self.assertEqual(settings.free_params, {"v_a": (0.05, 0.8), "v_b": (0.05, 0.8)})
        self.assertEqual(settings.loss, LossKind.NORMALIZED_RMSE)
        self.assertEqual(settings.initial_state_policy, InitialStatePolicy.FIXED_FRACTION)
        self.assertEqual(settings.optimizer, RandomSearch(5, 2))
        self.assertEqual(settings.report, Path("fit_report.yaml"))

        problem = config.fit_problem(synthetic_measurement(config.device, n_samples=20))
        self.assertIsInstance(problem, FitProblem)
        self.assertEqual(problem.free_names, ("v_a", "v_b"))

    def test_fit_errors(self):
        fit_section = {
            "measured": "measured.csv",
            "free": {"v_a": [0.3, 0.5], "v_b": [0.8, 0.05], "n_switches": [1, 10]},
        }

        paths = self._issue_paths(_config(fit=fit_section))
        self.assertEqual(sorted(paths), ["fit.free.n_switches", "fit.free.v_a", "fit.free.v_b"])

        paths = self._issue_paths(_config(fit={"measured": "measured.csv", "loss": "mae", "optimizer": {"tol": 0}}))
        self.assertEqual(sorted(paths), ["fit.loss", "fit.optimizer.tol"])

    def test_sweep_section(self):
        config = parse_config(_config(sweep={"parameter": "v_a", "values": [0.2, "3e-1"], "svg": True}))

        self.assertEqual(config.sweep.parameter, "v_a")
        self.assertEqual(config.sweep.values, (0.2, 0.3))
        self.assertEqual(config.sweep.prefix, "sweep")
        self.assertTrue(config.sweep.svg)

        paths = self._issue_paths(_config(sweep={"parameter": "t_c", "values": [1e-4, 1e-7]}))
        self.assertEqual(paths, ["sweep.values[1]"])

        paths = self._issue_paths(_config(sweep={"parameter": "n_switches", "values": [10, 2.5]}))
        self.assertEqual(paths, ["sweep.values[1]"])

    def test_load_reads_exponents_without_dot(self):
        text = "device:\n  preset: chalcogenide\ndrive:\n  amplitude: 0.5\n  frequency: 500\ngrid:\n  dt: 1e-6\n"
        path = write_text(os.path.join(self.temp_dir, "config.yaml"), text)

        config = load_config(path)

        self.assertEqual(config.grid.dt, 1e-6)
        self.assertEqual(config.drive.frequency, 500.0)

    def test_load_failures(self):
        with self.assertRaises(ConfigError) as context:
            load_config(Path(self.temp_dir) / "missing.yaml")
        self.assertEqual(context.exception.paths, [""])

        path = write_text(os.path.join(self.temp_dir, "broken.yaml"), "device: [unclosed\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual(context.exception.paths, [""])

        path = write_text(os.path.join(self.temp_dir, "list.yaml"), "- 1\n- 2\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual(context.exception.paths, [""])

        path = write_bytes(os.path.join(self.temp_dir, "binary.yaml"), b"device:\n  preset: \xff\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual(context.exception.paths, [""])
        self.assertIn("not valid UTF-8", str(context.exception))


if __name__ == "__main__":
    unittest.main()
