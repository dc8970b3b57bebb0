"""Command Line Interface `mss-sim`.

Commands:
  - simulate: run the configured device or series circuit and write trace CSV/SVG files.
  - fit: recover the configured free parameters from a measured CSV; writes a YAML report and an overlay SVG.
  - sweep: repeat the simulation over a list of values of one device parameter, one trace per value.
  - demo-fig1: simulate the three reference hysteresis regimes (no config needed).

Exit codes: 0 success, 1 usage error, 2 invalid config or input file, 3 model, solver or fit failure.
Every failure is reported as a single line on stderr:

    mss-sim: error: code=2 kind=config path=grid.dt message=...
"""
from typing import Any, Dict, List, Optional, Sequence
from logging import getLogger
from pathlib import Path
import logging
import sys

import click
import yaml

from .analysis import loop_area, steady_state_period
from .circuit import SolverError
from .constants import DEFAULT_AMPLITUDE, DEFAULT_DT, DEFAULT_FREQUENCY, DEFAULT_STEPS, VERSION
from .drivers import Sine, TimeGrid
from .errors import MssModelError
from .fitting import FitError, fit, simulate_for_fit
from .formats import ConfigError, TraceFormatError
from .formats.config import ConfigOverrides, SimulationConfig, load_config
from .formats.csv_io import read_measurement_csv, write_trace_csv
from .formats.svg import write_iv_svg, write_overlay_svg
from .model import MssParams, get_preset
from .simulation import CircuitElementSpec, SimulationMode, simulate_circuit
from .stochastics import SamplerMode
from .trace import Trace

# pylint: disable=C0103
logger = getLogger(__name__)

PROG_NAME = "mss-sim"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

DEMO_PANELS = (("top", "chalcogenide"), ("center", "chalcogenide-sparse"), ("bottom", "chalcogenide-diode"))

DEFAULT_TRACE_CSV = "trace.csv"


def _report_failure(code: int, kind: str, message: str, path: Optional[str] = None) -> int:
    fields = [f"code={code}", f"kind={kind}"]
    if path:
        fields.append(f"path={path}")
    fields.append("message=" + " ".join(message.split()))
    click.echo(f"{PROG_NAME}: error: " + " ".join(fields), err=True)
    return code


class _ExitCodeGroup(click.Group):
    """Maps library errors onto the exit codes of the tool."""

    def main(  # type: ignore
        self,
        args: Any = None,
        prog_name: Any = None,
        complete_var: Any = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> Any:
        try:
            result = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
            code = result if isinstance(result, int) else EXIT_OK
        except click.exceptions.UsageError as error:
            code = _report_failure(EXIT_USAGE, "usage", error.format_message())
        except click.exceptions.Abort:
            code = _report_failure(EXIT_USAGE, "aborted", "interrupted")
        except ConfigError as error:
            code = _report_failure(EXIT_CONFIG, "config", str(error), ",".join(path for path in error.paths if path))
        except TraceFormatError as error:
            code = _report_failure(EXIT_CONFIG, error.kind_name, str(error))
        except (MssModelError, SolverError, FitError) as error:
            code = _report_failure(EXIT_RUNTIME, error.kind_name, str(error))
        except OSError as error:
            code = _report_failure(EXIT_RUNTIME, "io", str(error), error.filename)

        if standalone_mode:
            sys.exit(code)
        return code


def _configure_logging(verbose: bool) -> None:
    # Errors are reported as one line by the group; module warnings only show up with --verbose.
    level = logging.DEBUG if verbose else logging.ERROR
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


@click.group(cls=_ExitCodeGroup)
@click.version_option(VERSION, prog_name=PROG_NAME)
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages to stderr.")
def cli(verbose: bool) -> None:
    """Generalized metastable switch memristor simulator."""
    _configure_logging(verbose)


def _run_options(require_config: bool = True) -> Any:
    def decorate(command: Any) -> Any:
        options = [
            click.option("--steps", type=click.IntRange(min=1), default=None, help="Number of time steps."),
            click.option("--dt", type=float, default=None, help="Time step in seconds."),
            click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="Output directory."),
            click.option("--mode", type=click.Choice([mode.value for mode in SimulationMode]), help="Stepping mode."),
            click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None, help="Random seed."),
        ]
        if require_config:
            options.append(
                click.option(
                    "--config", "config_path", type=click.Path(dir_okay=False), required=True, help="YAML config."
                )
            )
        for option in options:
            command = option(command)
        return command

    return decorate


def _load(
    config_path: str,
    seed: Optional[int],
    mode: Optional[str],
    out_dir: Optional[str],
    dt: Optional[float],
    steps: Optional[int],
) -> SimulationConfig:
    overrides = ConfigOverrides(seed, mode, dt, steps, Path(out_dir) if out_dir is not None else None)
    return load_config(Path(config_path), overrides)


def _prepare(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _simulate(config: SimulationConfig, elements: Sequence[CircuitElementSpec], stream_id: int) -> Trace:
    return simulate_circuit(
        elements,
        config.drive,
        config.grid,
        config.mode,
        config.seed,
        stream_id,
        config.sampler,
        config.initial_fraction_a,
    )


@cli.command()
@_run_options()
def simulate(
    config_path: str,
    seed: Optional[int],
    mode: Optional[str],
    out_dir: Optional[str],
    dt: Optional[float],
    steps: Optional[int],
) -> None:
    """Simulate the configured device or series circuit."""
    config = _load(config_path, seed, mode, out_dir, dt, steps)
    trace = _simulate(config, config.elements, config.stream_id)

    outputs = config.outputs or ()
    written: List[Path] = []
    if not outputs:
        written.append(_prepare(config.output_path(Path(DEFAULT_TRACE_CSV))))
        write_trace_csv(trace, written[-1])
    for output in outputs:
        if output.csv is not None:
            written.append(_prepare(config.output_path(output.csv)))
            write_trace_csv(trace, written[-1])
        if output.svg is not None:
            written.append(_prepare(config.output_path(output.svg)))
            write_iv_svg(trace, written[-1])
    for path in written:
        click.echo(f"wrote {path}")


@cli.command(name="fit")
@_run_options()
def fit_command(
    config_path: str,
    seed: Optional[int],
    mode: Optional[str],
    out_dir: Optional[str],
    dt: Optional[float],
    steps: Optional[int],
) -> None:
    """Fit the free device parameters of the config to a measured trace."""
    config = _load(config_path, seed, mode, out_dir, dt, steps)
    if config.fit is None:
        raise ConfigError.single("fit", "the fit command needs a fit section")
    settings = config.fit

    measured = read_measurement_csv(settings.measured)
    result = fit(config.fit_problem(measured))
    model = simulate_for_fit(result.params, measured, settings.initial_state_policy)

    report = result.to_report()
    report["measured"] = str(settings.measured)
    report["loss"] = settings.loss.value
    report_path = _prepare(config.output_path(settings.report))
    with open(report_path, "w", encoding="utf-8") as target:
        yaml.safe_dump(report, target, sort_keys=False)
    overlay_path = _prepare(config.output_path(settings.overlay))
    details = {name: repr(value) for name, value in report["free_params"].items()}
    details["loss"] = f"{settings.loss.value} = {result.loss_value:.6g}"
    write_overlay_svg(measured, model, overlay_path, details)

    click.echo(f"mode: {report['mode']}")
    click.echo(f"loss_value: {result.loss_value!r}")
    click.echo(f"iterations: {result.iterations}")
    click.echo(f"converged: {str(result.converged).lower()}")
    for name, value in report["free_params"].items():
        click.echo(f"{name}: {value!r}")
    click.echo(f"wrote {report_path}")
    click.echo(f"wrote {overlay_path}")


def _sweep_elements(config: SimulationConfig, value: float) -> List[CircuitElementSpec]:
    # The sweep section exists when this is called.
    assert config.sweep is not None
    settings = config.sweep
    elements: List[CircuitElementSpec] = []
    device_index = 0
    for element in config.elements:
        if isinstance(element, MssParams):
            if device_index == settings.element:
                element = element.with_named_values({settings.parameter: value})
            device_index += 1
        elements.append(element)
    return elements


@cli.command()
@_run_options()
def sweep(
    config_path: str,
    seed: Optional[int],
    mode: Optional[str],
    out_dir: Optional[str],
    dt: Optional[float],
    steps: Optional[int],
) -> None:
    """Repeat the simulation over the values of one device parameter."""
    config = _load(config_path, seed, mode, out_dir, dt, steps)
    if config.sweep is None:
        raise ConfigError.single("sweep", "the sweep command needs a sweep section")
    settings = config.sweep

    devices_per_point = len(config.devices)
    for index, value in enumerate(settings.values):
        stream_id = config.stream_id + index * devices_per_point
        trace = _simulate(config, _sweep_elements(config, value), stream_id)
        trace.metadata["sweep"] = f"{{parameter: {settings.parameter}, value: {value!r}, index: {index}}}"

        csv_path = _prepare(config.output_path(Path(f"{settings.prefix}_{index:03d}.csv")))
        write_trace_csv(trace, csv_path)
        click.echo(f"wrote {csv_path}")
        if settings.svg:
            svg_path = _prepare(config.output_path(Path(f"{settings.prefix}_{index:03d}.svg")))
            write_iv_svg(trace, svg_path, f"{settings.parameter} = {value!r}")
            click.echo(f"wrote {svg_path}")


@cli.command(name="demo-fig1")
@_run_options(require_config=False)
def demo_fig1(
    seed: Optional[int], mode: Optional[str], out_dir: Optional[str], dt: Optional[float], steps: Optional[int]
) -> None:
    """Simulate the three reference hysteresis regimes under a 0.5 V, 500 Hz sine."""
    grid = TimeGrid(dt if dt is not None else DEFAULT_DT, steps if steps is not None else DEFAULT_STEPS)
    drive = Sine(DEFAULT_AMPLITUDE, DEFAULT_FREQUENCY)
    simulation_mode = SimulationMode.parse(mode or SimulationMode.STOCHASTIC.value)
    seed = 1 if seed is None else seed
    directory = Path(out_dir) if out_dir is not None else Path(".")

    panels: Dict[str, MssParams] = {panel: get_preset(preset) for panel, preset in DEMO_PANELS}
    for params in panels.values():
        if grid.dt > params.t_c:
            raise ConfigError.single("grid.dt", f"dt = {grid.dt} exceeds the device characteristic time {params.t_c}")

    for panel, params in panels.items():
        trace = simulate_circuit([params], drive, grid, simulation_mode, seed, 0, SamplerMode.AUTO)
        csv_path = _prepare(directory / f"fig1_{panel}.csv")
        svg_path = _prepare(directory / f"fig1_{panel}.svg")
        write_trace_csv(trace, csv_path)
        write_iv_svg(trace, svg_path, f"{panel} panel")

        period = steady_state_period(trace, drive.period)
        click.echo(f"{panel}: loop_area={loop_area(period.v, period.i):.6g} wrote {csv_path} {svg_path}")


def main(args: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `mss-sim` console script; returns the exit code."""
    return cli.main(args=list(args) if args is not None else None, prog_name=PROG_NAME, standalone_mode=False)
