"""YAML Simulation Configs.

A config describes one device (`device`) or a series chain (`elements`), the drive, the time grid, the
simulation mode and the outputs, plus the `fit` and `sweep` sections used by the commands of the same name.
The whole file is validated before anything runs: every violation is collected with the dotted path of the
offending field and reported in one ConfigError.

Example config:

.. code-block:: yaml

    device:
      preset: chalcogenide
    drive:
      type: sine
      amplitude: 0.5
      frequency: 500.0
    grid:
      dt: 1.0e-6
      n_steps: 4000
    simulation:
      mode: stochastic
      seed: 1
    outputs:
      - csv: trace.csv
        svg: trace.svg
"""
from typing import Any, Dict, List, Optional, Tuple
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path

import yaml

from ..circuit import Resistor
from ..constants import DEFAULT_DT, DEFAULT_STEPS, MAX_U64
from ..drivers import Dc, Interpolation, Piecewise, PulseTrain, Sine, TimeGrid, Triangle, WaveformSpec, waveform_types
from ..errors import MssModelError
from ..fitting import FitProblem, InitialStatePolicy, LossKind, NelderMead, Optimizer, RandomSearch
from ..model import ALL_PARAMETERS, CONTINUOUS_PARAMETERS, DiodeParams, MssParams, get_preset, preset_names
from ..simulation import CircuitElementSpec, SimulationMode
from ..stochastics import SamplerMode
from ..trace import MeasuredTrace
from .errors import ConfigError
from .validation import (
    Issues,
    as_number,
    check_keys,
    is_dict,
    is_integer,
    join_path,
    read_choice,
    read_integer,
    read_number,
    read_section,
    read_string,
)

# pylint: disable=C0103
logger = getLogger(__name__)

TOP_LEVEL_KEYS = ("device", "elements", "drive", "grid", "simulation", "outputs", "fit", "sweep")
DEVICE_KEYS = ("preset", "n_switches", "t_c", "g_a_total", "g_b_total", "v_a", "v_b", "phi", "temperature", "diode")
DIODE_KEYS = ("alpha_f", "beta_f", "alpha_r", "beta_r")
DRIVE_KEYS = {
    "sine": ("type", "amplitude", "frequency", "phase", "offset"),
    "triangle": ("type", "amplitude", "frequency", "offset"),
    "pulse": ("type", "high", "low", "width", "period", "count"),
    "piecewise": ("type", "points", "interpolation"),
    "dc": ("type", "v"),
}
SIMULATION_KEYS = ("mode", "seed", "stream_id", "sampler", "initial_fraction_a")
FIT_KEYS = ("measured", "free", "loss", "initial_state_policy", "optimizer", "report", "overlay")
SWEEP_KEYS = ("parameter", "values", "element", "prefix", "svg")

DEFAULT_FIT_REPORT = "fit_report.yaml"
DEFAULT_FIT_OVERLAY = "fit_overlay.svg"


@dataclass(frozen=True)
class ConfigOverrides:
    """Values given on the command line; they replace the config values before validation."""

    seed: Optional[int] = None
    mode: Optional[str] = None
    dt: Optional[float] = None
    steps: Optional[int] = None
    out_dir: Optional[Path] = None


@dataclass(frozen=True)
class OutputSpec:
    """Files written for a simulated trace."""

    csv: Optional[Path] = None
    svg: Optional[Path] = None


@dataclass(frozen=True)
class FitSettings:
    """The `fit` section: measured file, free parameters with bounds, loss, policy and optimizer."""

    measured: Path
    free_params: Dict[str, Tuple[float, float]]
    loss: LossKind = LossKind.RMSE
    initial_state_policy: InitialStatePolicy = InitialStatePolicy.BURN_IN
    optimizer: Optimizer = field(default_factory=NelderMead)
    report: Path = Path(DEFAULT_FIT_REPORT)
    overlay: Path = Path(DEFAULT_FIT_OVERLAY)


@dataclass(frozen=True)
class SweepSettings:
    """The `sweep` section: one device parameter stepped through a list of values."""

    parameter: str
    values: Tuple[float, ...]
    element: int = 0
    prefix: str = "sweep"
    svg: bool = False


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """Validated config.

    `elements` holds one MssParams for a standalone device, or the series chain in circuit order.
    """

    elements: Tuple[CircuitElementSpec, ...]
    drive: WaveformSpec
    grid: TimeGrid
    mode: SimulationMode = SimulationMode.STOCHASTIC
    seed: int = 0
    stream_id: int = 0
    sampler: SamplerMode = SamplerMode.AUTO
    initial_fraction_a: float = 0.5
    outputs: Tuple[OutputSpec, ...] = ()
    fit: Optional[FitSettings] = None
    sweep: Optional[SweepSettings] = None
    out_dir: Path = Path(".")

    @property
    def devices(self) -> List[MssParams]:
        return [element for element in self.elements if isinstance(element, MssParams)]

    @property
    def device(self) -> MssParams:
        """The first device of the config."""
        return self.devices[0]

    def output_path(self, path: Path) -> Path:
        """Resolves a relative output path against the output directory."""
        return path if path.is_absolute() else self.out_dir / path

    def fit_problem(self, measured: MeasuredTrace) -> FitProblem:
        """Fit problem of the `fit` section, starting from the configured device."""
        if self.fit is None:
            raise ConfigError.single("fit", "the config has no fit section")
        settings = self.fit
        return FitProblem(
            measured,
            self.device,
            settings.free_params,
            settings.initial_state_policy,
            settings.loss,
            settings.optimizer,
        )


def _model_error_path(prefix: str, error: MssModelError) -> str:
    name = error.error_data.get("name")
    return join_path(prefix, str(name)) if name else prefix


def _read_diode(data: Dict[Any, Any], prefix: str, issues: Issues) -> Dict[str, float]:
    check_keys(data, DIODE_KEYS, prefix, issues)
    values: Dict[str, float] = {}
    for name in DIODE_KEYS:
        if name in data:
            value = read_number(data, name, prefix, issues, non_negative=True)
            if value is not None:
                values[f"diode.{name}"] = value
    return values


def read_device(data: Any, prefix: str, issues: Issues) -> Optional[MssParams]:
    """Device mapping: an optional `preset` plus explicit fields overriding it."""
    if not is_dict(data):
        issues.add(prefix, "expected a device mapping")
        return None
    check_keys(data, DEVICE_KEYS, prefix, issues)
    errors_before = len(issues)

    base: Optional[MssParams] = None
    if "preset" in data:
        name = read_string(data, "preset", prefix, issues)
        if name is not None and name not in preset_names():
            issues.add(join_path(prefix, "preset"), f"unknown preset, expected one of {', '.join(preset_names())}")
        elif name is not None:
            base = get_preset(name)

    values: Dict[str, Any] = {}
    if "n_switches" in data or "preset" not in data:
        n_switches = read_integer(data, "n_switches", prefix, issues, minimum=1)
        if n_switches is not None:
            values["n_switches"] = n_switches
    required = ("t_c", "g_a_total", "g_b_total", "v_a", "v_b")
    for name in required:
        if name in data or "preset" not in data:
            value = read_number(data, name, prefix, issues, positive=name in ("t_c", "g_a_total", "g_b_total"))
            if value is not None:
                values[name] = value
    for name in ("phi", "temperature"):
        if name in data:
            value = read_number(data, name, prefix, issues, non_negative=True)
            if value is not None:
                values[name] = value
    if "diode" in data:
        diode_prefix = join_path(prefix, "diode")
        if is_dict(data["diode"]):
            values.update(_read_diode(data["diode"], diode_prefix, issues))
        else:
            issues.add(diode_prefix, "expected a mapping")

    if len(issues) > errors_before:
        return None
    try:
        if base is not None:
            return base.with_named_values(values)
        diode = {name[len("diode.") :]: value for name, value in values.items() if name.startswith("diode.")}
        own = {name: value for name, value in values.items() if not name.startswith("diode.")}
        return MssParams(diode=DiodeParams(**diode), **own)
    except MssModelError as error:
        issues.add(_model_error_path(prefix, error), str(error))
        return None


def read_elements(data: Dict[Any, Any], issues: Issues) -> List[CircuitElementSpec]:
    """The `device` mapping or the `elements` list (exactly one of them)."""
    if ("device" in data) == ("elements" in data):
        issues.add("device", "exactly one of 'device' or 'elements' is required")
        return []
    if "device" in data:
        device = read_device(data["device"], "device", issues)
        return [device] if device is not None else []

    entries = data["elements"]
    if not isinstance(entries, list) or not entries:
        issues.add("elements", "expected a non-empty list")
        return []
    elements: List[CircuitElementSpec] = []
    for index, entry in enumerate(entries):
        prefix = f"elements[{index}]"
        if not is_dict(entry) or len(entry) != 1 or next(iter(entry)) not in ("device", "resistor"):
            issues.add(prefix, "expected a mapping with a single 'device' or 'resistor' key")
            continue
        if "device" in entry:
            device = read_device(entry["device"], f"{prefix}.device", issues)
            if device is not None:
                elements.append(device)
            continue
        resistor = entry["resistor"]
        resistor_prefix = f"{prefix}.resistor"
        if not is_dict(resistor):
            issues.add(resistor_prefix, "expected a mapping")
            continue
        check_keys(resistor, ("conductance",), resistor_prefix, issues)
        conductance = read_number(resistor, "conductance", resistor_prefix, issues, positive=True)
        if conductance is not None:
            elements.append(Resistor(conductance))
    if not any(isinstance(element, MssParams) for element in elements):
        issues.add("elements", "at least one device is required")
    return elements


def _read_points(data: Dict[Any, Any], prefix: str, issues: Issues) -> Tuple[Tuple[float, float], ...]:
    path = join_path(prefix, "points")
    points = data.get("points")
    if not isinstance(points, list) or not points:
        issues.add(path, "expected a non-empty list of [t, v] pairs")
        return ()
    parsed = []
    for index, point in enumerate(points):
        pair = [as_number(value) for value in point] if isinstance(point, list) else []
        if len(pair) != 2 or pair[0] is None or pair[1] is None:
            issues.add(f"{path}[{index}]", f"expected a [t, v] pair of numbers, got {point!r}")
            continue
        parsed.append((pair[0], pair[1]))
    return tuple(parsed)


def read_drive(data: Dict[Any, Any], issues: Issues) -> Optional[WaveformSpec]:
    """The `drive` mapping, selected by its `type`."""
    prefix = "drive"
    kind = read_choice(data, "type", prefix, issues, list(waveform_types()), "sine")
    if kind is None:
        return None
    check_keys(data, DRIVE_KEYS[kind], prefix, issues)
    errors_before = len(issues)

    spec: Optional[WaveformSpec] = None
    try:
        if kind == "sine":
            amplitude = read_number(data, "amplitude", prefix, issues)
            frequency = read_number(data, "frequency", prefix, issues, positive=True)
            phase = read_number(data, "phase", prefix, issues, default=0.0)
            offset = read_number(data, "offset", prefix, issues, default=0.0)
            if len(issues) == errors_before:
                spec = Sine(amplitude, frequency, phase, offset)  # type: ignore
        elif kind == "triangle":
            amplitude = read_number(data, "amplitude", prefix, issues)
            frequency = read_number(data, "frequency", prefix, issues, positive=True)
            offset = read_number(data, "offset", prefix, issues, default=0.0)
            if len(issues) == errors_before:
                spec = Triangle(amplitude, frequency, offset)  # type: ignore
        elif kind == "pulse":
            high = read_number(data, "high", prefix, issues)
            low = read_number(data, "low", prefix, issues, default=0.0)
            width = read_number(data, "width", prefix, issues, positive=True)
            period = read_number(data, "period", prefix, issues, positive=True)
            count = read_integer(data, "count", prefix, issues, default=1, minimum=1)
            if len(issues) == errors_before:
                spec = PulseTrain(high, low, width, period, count)  # type: ignore
        elif kind == "piecewise":
            points = _read_points(data, prefix, issues)
            interpolation = read_choice(data, "interpolation", prefix, issues, ("hold", "linear"), "linear")
            if len(issues) == errors_before:
                spec = Piecewise(points, Interpolation(interpolation))
        else:
            v = read_number(data, "v", prefix, issues)
            if len(issues) == errors_before:
                spec = Dc(v)  # type: ignore
    except MssModelError as error:
        issues.add(_model_error_path(prefix, error), str(error))
        return None
    return spec


def read_grid(data: Dict[Any, Any], issues: Issues) -> Optional[TimeGrid]:
    prefix = "grid"
    check_keys(data, ("dt", "n_steps", "t_start"), prefix, issues)
    dt = read_number(data, "dt", prefix, issues, default=DEFAULT_DT, positive=True)
    n_steps = read_integer(data, "n_steps", prefix, issues, default=DEFAULT_STEPS, minimum=1)
    t_start = read_number(data, "t_start", prefix, issues, default=0.0, non_negative=True)
    if dt is None or n_steps is None or t_start is None:
        return None
    return TimeGrid(dt, n_steps, t_start)


def read_outputs(data: Any, issues: Issues) -> Tuple[OutputSpec, ...]:
    if data is None:
        return ()
    if not isinstance(data, list):
        issues.add("outputs", "expected a list of {csv, svg} mappings")
        return ()
    outputs = []
    for index, entry in enumerate(data):
        prefix = f"outputs[{index}]"
        if not is_dict(entry) or not entry:
            issues.add(prefix, "expected a mapping with 'csv' and/or 'svg'")
            continue
        check_keys(entry, ("csv", "svg"), prefix, issues)
        csv_path = read_string(entry, "csv", prefix, issues, "") if "csv" in entry else None
        svg_path = read_string(entry, "svg", prefix, issues, "") if "svg" in entry else None
        outputs.append(OutputSpec(Path(csv_path) if csv_path else None, Path(svg_path) if svg_path else None))
    return tuple(outputs)


def _read_optimizer(data: Any, issues: Issues) -> Optimizer:
    prefix = "fit.optimizer"
    if data is None:
        return NelderMead()
    if not is_dict(data):
        issues.add(prefix, "expected a mapping")
        return NelderMead()
    kind = read_choice(data, "type", prefix, issues, ("nelder-mead", "random-search"), "nelder-mead")
    if kind == "random-search":
        check_keys(data, ("type", "budget", "seed"), prefix, issues)
        budget = read_integer(data, "budget", prefix, issues, default=RandomSearch.budget, minimum=1)
        seed = read_integer(data, "seed", prefix, issues, default=RandomSearch.seed)
        return RandomSearch(budget or RandomSearch.budget, seed or 0)
    check_keys(data, ("type", "max_iters", "tol"), prefix, issues)
    max_iters = read_integer(data, "max_iters", prefix, issues, default=NelderMead.max_iters, minimum=1)
    tol = read_number(data, "tol", prefix, issues, default=NelderMead.tol, positive=True)
    return NelderMead(max_iters or NelderMead.max_iters, tol or NelderMead.tol)


def read_fit(data: Dict[Any, Any], base_dir: Path, issues: Issues) -> Optional[FitSettings]:
    prefix = "fit"
    check_keys(data, FIT_KEYS, prefix, issues)
    measured = read_string(data, "measured", prefix, issues)

    free: Dict[str, Tuple[float, float]] = {}
    free_data = read_section(data, "free", prefix, issues)
    for name, bounds in free_data.items():
        path = f"{prefix}.free.{name}"
        if name not in CONTINUOUS_PARAMETERS:
            issues.add(path, f"not a fittable parameter, expected one of {', '.join(CONTINUOUS_PARAMETERS)}")
            continue
        pair = [as_number(value) for value in bounds] if isinstance(bounds, list) else []
        if len(pair) != 2 or pair[0] is None or pair[1] is None or not pair[0] < pair[1]:
            issues.add(path, f"expected finite [lower, upper] bounds with lower < upper, got {bounds!r}")
            continue
        free[name] = (pair[0], pair[1])

    loss = read_choice(data, "loss", prefix, issues, [kind.value for kind in LossKind], LossKind.RMSE.value)
    policy = read_choice(
        data,
        "initial_state_policy",
        prefix,
        issues,
        [policy.value for policy in InitialStatePolicy],
        InitialStatePolicy.BURN_IN.value,
    )
    optimizer = _read_optimizer(data.get("optimizer"), issues)
    report = read_string(data, "report", prefix, issues, DEFAULT_FIT_REPORT)
    overlay = read_string(data, "overlay", prefix, issues, DEFAULT_FIT_OVERLAY)
    if measured is None or loss is None or policy is None or report is None or overlay is None:
        return None

    measured_path = Path(measured)
    if not measured_path.is_absolute():
        measured_path = base_dir / measured_path
    return FitSettings(
        measured_path, free, LossKind(loss), InitialStatePolicy(policy), optimizer, Path(report), Path(overlay)
    )


def read_sweep(data: Dict[Any, Any], issues: Issues) -> Optional[SweepSettings]:
    prefix = "sweep"
    check_keys(data, SWEEP_KEYS, prefix, issues)
    parameter = read_choice(data, "parameter", prefix, issues, ALL_PARAMETERS, "")
    element = read_integer(data, "element", prefix, issues, default=0)
    sweep_prefix = read_string(data, "prefix", prefix, issues, "sweep")
    svg = data.get("svg", False)
    if not isinstance(svg, bool):
        issues.add(f"{prefix}.svg", "expected true or false")

    raw_values = data.get("values")
    values: List[float] = []
    if not isinstance(raw_values, list) or not raw_values:
        issues.add(f"{prefix}.values", "expected a non-empty list of numbers")
    else:
        for index, raw in enumerate(raw_values):
            if parameter == "n_switches":
                if not is_integer(raw) or raw < 1:
                    issues.add(f"{prefix}.values[{index}]", f"expected an integer >= 1, got {raw!r}")
                    continue
                values.append(raw)
                continue
            value = as_number(raw)
            if value is None:
                issues.add(f"{prefix}.values[{index}]", f"expected a finite number, got {raw!r}")
                continue
            values.append(value)

    if not parameter or element is None or sweep_prefix is None or not isinstance(svg, bool):
        return None
    return SweepSettings(parameter, tuple(values), element, sweep_prefix, svg)


def _check_sweep_points(
    settings: SweepSettings, elements: List[CircuitElementSpec], grid: TimeGrid, issues: Issues
) -> None:
    devices = [element for element in elements if isinstance(element, MssParams)]
    if settings.element >= len(devices):
        issues.add("sweep.element", f"device index {settings.element} out of range ({len(devices)} devices)")
        return
    device = devices[settings.element]
    for index, value in enumerate(settings.values):
        path = f"sweep.values[{index}]"
        try:
            params = device.with_named_values({settings.parameter: value})
        except MssModelError as error:
            issues.add(path, str(error))
            continue
        if grid.dt > params.t_c:
            issues.add(path, f"t_c = {params.t_c} is shorter than grid.dt = {grid.dt}")


def _apply_overrides(data: Dict[Any, Any], overrides: ConfigOverrides) -> Dict[Any, Any]:
    data = dict(data)
    sections = {
        "simulation": {"seed": overrides.seed, "mode": overrides.mode},
        "grid": {"dt": overrides.dt, "n_steps": overrides.steps},
    }
    for section, values in sections.items():
        given = {key: value for key, value in values.items() if value is not None}
        current = data.get(section) or {}
        # A malformed section is left alone and reported by validation.
        if given and is_dict(current):
            data[section] = {**current, **given}
    return data


def parse_config(
    data: Any, base_dir: Path = Path("."), overrides: ConfigOverrides = ConfigOverrides()
) -> SimulationConfig:
    """
    Validates a parsed YAML document and builds the SimulationConfig.

    Parameters
    ----------
    data: Any
        The document as returned by `yaml.safe_load`.
    base_dir: Path
        Directory relative input paths (the measured trace of a fit) are resolved against.
    overrides: ConfigOverrides
        Command line values replacing config values before validation.

    Raises
    ------
    ConfigError
        With every violation found, each tagged with its config path.
    """
    if not is_dict(data):
        raise ConfigError.single("", "the config must be a mapping")
    data = _apply_overrides(data, overrides)
    issues = Issues()
    check_keys(data, TOP_LEVEL_KEYS, "", issues)

    elements = read_elements(data, issues)
    drive = read_drive(read_section(data, "drive", "", issues), issues)
    grid = read_grid(read_section(data, "grid", "", issues), issues)

    simulation = read_section(data, "simulation", "", issues)
    check_keys(simulation, SIMULATION_KEYS, "simulation", issues)
    modes = [mode.value for mode in SimulationMode]
    mode = read_choice(simulation, "mode", "simulation", issues, modes, SimulationMode.STOCHASTIC.value)
    seed = read_integer(simulation, "seed", "simulation", issues, default=0)
    stream_id = read_integer(simulation, "stream_id", "simulation", issues, default=0)
    for name, value in (("seed", seed), ("stream_id", stream_id)):
        if value is not None and value > MAX_U64:
            issues.add(f"simulation.{name}", "must fit into a 64-bit unsigned integer")
    samplers = [sampler.value for sampler in SamplerMode]
    sampler = read_choice(simulation, "sampler", "simulation", issues, samplers, SamplerMode.AUTO.value)
    fraction = read_number(simulation, "initial_fraction_a", "simulation", issues, default=0.5, non_negative=True)
    if fraction is not None and fraction > 1.0:
        issues.add("simulation.initial_fraction_a", f"must be <= 1, got {fraction}")

    outputs = read_outputs(data.get("outputs"), issues)
    fit = read_fit(data["fit"], base_dir, issues) if is_dict(data.get("fit")) else None
    if "fit" in data and not is_dict(data["fit"]):
        issues.add("fit", "expected a mapping")
    sweep = read_sweep(data["sweep"], issues) if is_dict(data.get("sweep")) else None
    if "sweep" in data and not is_dict(data["sweep"]):
        issues.add("sweep", "expected a mapping")

    if grid is not None:
        for element in elements:
            if isinstance(element, MssParams) and grid.dt > element.t_c:
                issues.add("grid.dt", f"dt = {grid.dt} exceeds the device characteristic time t_c = {element.t_c}")
                break
        if sweep is not None:
            _check_sweep_points(sweep, elements, grid, issues)
    devices = [element for element in elements if isinstance(element, MssParams)]
    if fit is not None and devices:
        for name, (lower, upper) in fit.free_params.items():
            value = devices[0].get_value(name)
            if not lower <= value <= upper:
                issues.add(f"fit.free.{name}", f"initial value {value} lies outside [{lower}, {upper}]")

    issues.raise_if_any()
    # All fields were validated above.
    assert drive is not None and grid is not None
    config = SimulationConfig(
        tuple(elements),
        drive,
        grid,
        SimulationMode(mode),
        seed or 0,
        stream_id or 0,
        SamplerMode(sampler),
        fraction if fraction is not None else 0.5,
        outputs,
        fit,
        sweep,
        overrides.out_dir if overrides.out_dir is not None else Path("."),
    )
    logger.debug("Config with %s elements validated.", len(config.elements))
    return config


def load_config(path: Path, overrides: ConfigOverrides = ConfigOverrides()) -> SimulationConfig:
    """
    Reads and validates a YAML config file.

    Raises
    ------
    ConfigError
        If the file cannot be read or parsed, or fails validation.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as source:
            data = yaml.safe_load(source)
    except OSError as error:
        err = ConfigError.single("", f"cannot read {path}: {error.strerror}")
        logger.warning(str(err))
        raise err
    except UnicodeDecodeError as error:
        err = ConfigError.single("", f"config is not valid UTF-8: {path}: {error.reason}")
        logger.warning(str(err))
        raise err
    except yaml.YAMLError as error:
        err = ConfigError.single("", f"cannot parse {path}: {error}")
        logger.warning(str(err))
        raise err

    return parse_config(data, path.parent, overrides)
