"""
Generalized Metastable Switch (MSS) Memristor Simulator.

This library models a memristor as a population of N two-state metastable switches whose voltage
dependent transitions are drawn from a binomial distribution, optionally blended with a Schottky
diode branch.

The main modules you can be interested in:
  - model:
    Device parameters (MssParams, DiodeParams), named presets and every per-step operation of the model.
  - simulation:
    Runners producing traces for a standalone device or a series circuit, stochastic or mean-field.
  - circuit:
    Series chains of devices and resistors solved at every step.
  - fitting:
    Recovery of device parameters from measured I-V traces.
  - formats:
    YAML configs, trace CSV files and SVG hysteresis plots.
  - cli:
    The `mss-sim` command line tool.
"""
from .constants import VERSION as __version__
from .errors import MssModelError
from .stochastics import RandomStream, SamplerMode, make_stream, sample_transitions
from .drivers import Sine, Triangle, PulseTrain, Piecewise, Dc, TimeGrid, waveform_value
from .model import MssParams, DiodeParams, DeviceState, get_preset
from .trace import Trace, MeasuredTrace
from .simulation import SimulationMode, simulate_device, simulate_circuit
