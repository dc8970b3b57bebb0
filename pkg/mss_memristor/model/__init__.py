"""Generalized MSS Device Model.

This subpackage holds the device parameterization (MssParams, DiodeParams), the device state and every
per-step operation of the model: transition probabilities, Schottky current, conductance and the
stochastic and mean-field state updates."""
from .params import MssParams, DiodeParams, CONTINUOUS_PARAMETERS, ALL_PARAMETERS
from .device import (
    DeviceState,
    TransitionProbabilities,
    logistic_gamma,
    transition_probabilities,
    schottky_current,
    is_saturated,
    device_conductance,
    step_stochastic,
    step_expected,
    total_current,
)
from .presets import get_preset, preset_names
