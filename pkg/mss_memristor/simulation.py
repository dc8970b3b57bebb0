"""Trace Runners for Standalone Devices and Series Circuits.

A standalone device is simulated as a one-element series circuit, so both paths share one stepping loop and
a single-element circuit reproduces the standalone trace exactly for the same seed.

Example usage:

>>> from mss_memristor.model import get_preset
>>> from mss_memristor.drivers import Sine, TimeGrid
>>> trace = simulate_device(get_preset("chalcogenide"), Sine(0.5, 500.0), TimeGrid(1e-6, 4000), seed=1)
>>> len(trace)
4000
"""
from typing import Any, Dict, List, Optional, Sequence, Union
from enum import Enum
from logging import getLogger
import math

import numpy as np
import yaml

from .circuit import SeriesCircuit, MssDevice, Resistor, solve_series_step
from .circuit.elements import Element
from .constants import VERSION
from .drivers import TimeGrid, WaveformSpec, waveform_to_dict, waveform_value
from .errors import MssModelError
from .model import MssParams, DeviceState
from .stochastics import SamplerMode, make_stream
from .trace import Trace

# pylint: disable=C0103
logger = getLogger(__name__)


class SimulationMode(Enum):
    """Stochastic (binomial draws from a seeded stream) or mean-field (expected counts) stepping."""

    STOCHASTIC = "stochastic"
    MEAN_FIELD = "mean-field"

    @classmethod
    def parse(cls, value: Union[str, "SimulationMode"]) -> "SimulationMode":
        """Parses a mode from its config name ("stochastic", "mean-field")."""
        if isinstance(value, SimulationMode):
            return value
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            err = MssModelError.invalid_parameter("mode", value, "one of 'stochastic', 'mean-field'")
            logger.warning(str(err))
            raise err


CircuitElementSpec = Union[MssParams, Resistor]


def _flow_yaml(value: Any) -> str:
    return yaml.safe_dump(value, default_flow_style=True, width=math.inf).strip()


def _element_description(element: CircuitElementSpec) -> Dict[str, Any]:
    if isinstance(element, Resistor):
        return {"resistor": {"conductance": element.conductance}}
    return element.to_dict()


def trace_metadata(
    elements: Sequence[CircuitElementSpec],
    drive: WaveformSpec,
    grid: TimeGrid,
    mode: SimulationMode,
    seed: int,
    stream_id: int,
    sampler_mode: SamplerMode,
    initial_fraction_a: float,
) -> Dict[str, str]:
    """Header values that are sufficient to re-run a simulation exactly."""
    metadata = {
        "version": VERSION,
        "mode": mode.value,
        "seed": str(seed),
        "stream_id": str(stream_id),
        "sampler": sampler_mode.value,
        "initial_fraction_a": repr(float(initial_fraction_a)),
        "drive": _flow_yaml(waveform_to_dict(drive)),
        "grid": _flow_yaml({"dt": grid.dt, "n_steps": grid.n_steps, "t_start": grid.t_start}),
    }
    if len(elements) == 1 and isinstance(elements[0], MssParams):
        metadata["params"] = _flow_yaml(elements[0].to_dict())
    else:
        for index, element in enumerate(elements):
            metadata[f"element{index}"] = _flow_yaml(_element_description(element))
    return metadata


def build_elements(
    elements: Sequence[CircuitElementSpec],
    mode: SimulationMode = SimulationMode.STOCHASTIC,
    seed: int = 0,
    stream_id: int = 0,
    sampler_mode: SamplerMode = SamplerMode.AUTO,
    initial_fraction_a: float = 0.5,
) -> List[Element]:
    """
    Instantiates circuit elements; the j-th MSS device of the chain draws from stream `stream_id + j`.

    In mean-field mode devices carry no stream and start from real-valued populations.
    """
    built: List[Element] = []
    device_index = 0
    for element in elements:
        if isinstance(element, Resistor):
            built.append(element)
            continue
        if mode is SimulationMode.MEAN_FIELD:
            state = DeviceState.initial(element, initial_fraction_a, fractional=True)
            built.append(MssDevice(element, state, None, sampler_mode))
        else:
            state = DeviceState.initial(element, initial_fraction_a)
            built.append(MssDevice(element, state, make_stream(seed, stream_id + device_index), sampler_mode))
        device_index += 1
    return built


def _series_conductance(elements: Sequence[Element]) -> float:
    return 1.0 / sum(1.0 / element.conductance for element in elements if isinstance(element, Resistor))


def run_series(circuit: SeriesCircuit, metadata: Optional[Dict[str, str]] = None) -> Trace:
    """
    Steps `circuit` over its grid, solving the series partition at every step.

    The current column is the post-step current of the first MSS device at its solved voltage; for
    resistor-only chains it is the solved series current. The conductance and population columns follow
    the first device as well.
    """
    grid = circuit.grid
    n_steps = grid.n_steps
    devices = circuit.devices
    first = devices[0] if devices else None
    multi_element = len(circuit) > 1

    times = grid.times()
    volts = np.empty(n_steps)
    currents = np.empty(n_steps)
    conductances = np.empty(n_steps)
    populations = np.zeros(n_steps)
    element_voltages = np.empty((n_steps, len(circuit))) if multi_element else None
    saturated = False

    for k in range(n_steps):
        v_applied = waveform_value(circuit.drive, grid.time(k))
        result = solve_series_step(circuit, v_applied)

        volts[k] = v_applied
        currents[k] = result.device_current
        saturated = saturated or result.saturated
        if element_voltages is not None:
            element_voltages[k, :] = result.element_voltages
        if first is not None:
            conductances[k] = first.state.g_m
            populations[k] = first.state.n_a
        else:
            conductances[k] = _series_conductance(circuit.elements)

    if saturated:
        logger.warning("The Schottky branch saturated during the run; currents were clamped to the float range.")
    logger.debug("Simulated %s steps of a %s-element circuit.", n_steps, len(circuit))

    integer_populations = first is not None and not first.is_mean_field
    return Trace(
        times, volts, currents, conductances, populations, metadata, element_voltages, saturated, integer_populations
    )


def simulate_circuit(
    elements: Sequence[CircuitElementSpec],
    drive: WaveformSpec,
    grid: TimeGrid,
    mode: SimulationMode = SimulationMode.STOCHASTIC,
    seed: int = 0,
    stream_id: int = 0,
    sampler_mode: SamplerMode = SamplerMode.AUTO,
    initial_fraction_a: float = 0.5,
) -> Trace:
    """
    Simulates a series chain of devices (given by their parameters) and resistors.

    Raises
    ------
    MssModelError
        If the grid violates dt <= t_c for a device or a parameter is invalid.
    SolverError
        If the chain is empty or cannot be solved.
    """
    mode = SimulationMode.parse(mode)
    sampler_mode = SamplerMode.parse(sampler_mode)
    circuit = SeriesCircuit(
        build_elements(elements, mode, seed, stream_id, sampler_mode, initial_fraction_a), drive, grid
    )
    metadata = trace_metadata(elements, drive, grid, mode, seed, stream_id, sampler_mode, initial_fraction_a)
    return run_series(circuit, metadata)


def simulate_device(
    params: MssParams,
    drive: WaveformSpec,
    grid: TimeGrid,
    mode: SimulationMode = SimulationMode.STOCHASTIC,
    seed: int = 0,
    stream_id: int = 0,
    sampler_mode: SamplerMode = SamplerMode.AUTO,
    initial_fraction_a: float = 0.5,
) -> Trace:
    """
    Simulates a single device driven directly by `drive`.

    Parameters
    ----------
    params: MssParams
        Device parameters.
    drive: WaveformSpec
        Applied voltage.
    grid: TimeGrid
        Time grid, dt <= params.t_c.
    mode: SimulationMode
        STOCHASTIC draws transition counts from the stream (seed, stream_id); MEAN_FIELD uses expectations.
    sampler_mode: SamplerMode
        Binomial sampler for the stochastic mode.
    initial_fraction_a: float
        Initial share of switches in state A (rounded to a count in stochastic mode).

    Returns
    -------
    trace: Trace
        One row per grid step with the post-step current, conductance and population.
    """
    return simulate_circuit([params], drive, grid, mode, seed, stream_id, sampler_mode, initial_fraction_a)
