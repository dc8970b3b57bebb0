"""Series Circuit Elements and Their Static I-V Curves."""
from typing import Optional, Tuple, Union
from dataclasses import dataclass
from logging import getLogger
import math

from scipy.optimize import bisect

from ..constants import SOLVER_MAX_ITERATIONS
from ..errors import MssModelError
from ..model import MssParams, DeviceState, schottky_current, step_expected, step_stochastic, total_current
from ..stochastics import RandomStream, SamplerMode
from .errors import SolverError

# pylint: disable=C0103
logger = getLogger(__name__)

# Doublings allowed when searching a voltage bracket for a nonlinear element.
MAX_BRACKET_EXPANSIONS = 64

VOLTAGE_TOLERANCE = 1e-15


@dataclass(frozen=True)
class Resistor:
    """Linear resistor, `I = conductance * V`."""

    conductance: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.conductance) and self.conductance > 0.0):
            err = MssModelError.invalid_parameter("conductance", self.conductance, "finite value > 0")
            logger.warning(str(err))
            raise err


class MssDevice:
    """Memristor element of a series circuit.

    The device owns its state and, in stochastic mode, its random stream. Without a stream the device is
    advanced with the mean-field update.
    """

    def __init__(
        self,
        params: MssParams,
        state: Optional[DeviceState] = None,
        rng: Optional[RandomStream] = None,
        sampler_mode: SamplerMode = SamplerMode.AUTO,
    ):
        self.params = params
        self.rng = rng
        self.sampler_mode = sampler_mode
        self.state = state if state is not None else DeviceState.initial(params, fractional=rng is None)
        self.state.validate(params)
        self.last_delta_g = 0.0

    def __repr__(self) -> str:
        mode = "mean-field" if self.is_mean_field else repr(self.rng)
        return f"MssDevice(n_switches={self.params.n_switches}, g_m={self.state.g_m}, {mode})"

    @property
    def is_mean_field(self) -> bool:
        return self.rng is None

    @property
    def is_ohmic(self) -> bool:
        """True if the I-V curve within a step is affine (no voltage dependent Schottky part)."""
        diode = self.params.diode
        return self.params.phi == 1.0 or not diode.is_active or (diode.beta_f == 0.0 and diode.beta_r == 0.0)

    def advance(self, v: float, dt: float) -> Tuple[DeviceState, float]:
        """Advances the state by one step at voltage `v`; returns the new state and the conductance increment."""
        if self.is_mean_field:
            self.state, self.last_delta_g = step_expected(self.state, v, dt, self.params)
        else:
            # rng is set outside mean-field mode
            assert self.rng is not None
            self.state, self.last_delta_g = step_stochastic(
                self.state, v, dt, self.params, self.rng, self.sampler_mode
            )
        return self.state, self.last_delta_g

    def current(self, v: float) -> float:
        """Device current at `v` with the present state (`total_current` with the last increment)."""
        return total_current(v, self.state, self.last_delta_g, self.params)


Element = Union[MssDevice, Resistor]


def element_iv(element: Element, v: float) -> float:
    """
    Static I(V) of an element at frozen state.

    A device is evaluated with its present conductance and no increment, so within a solve the memory branch
    is Ohmic and only the Schottky branch is nonlinear.

    >>> element_iv(Resistor(1e-3), 0.2)
    0.0002
    """
    if isinstance(element, Resistor):
        return element.conductance * v
    return total_current(v, element.state, 0.0, element.params)


def is_strictly_increasing(element: Element) -> bool:
    """True if the element I(V) is strictly increasing, the precondition of the series solve."""
    if isinstance(element, Resistor):
        return True
    params = element.params
    diode = params.diode
    ohmic_slope = params.phi * element.state.g_m
    diode_slope = (1.0 - params.phi) * (diode.alpha_f * diode.beta_f + diode.alpha_r * diode.beta_r)
    return ohmic_slope > 0.0 or diode_slope > 0.0


def element_voltage(element: Element, current: float) -> float:
    """
    Voltage at which the element carries `current` (the inverse of `element_iv`).

    Ohmic elements are inverted analytically; elements with an active Schottky branch by bisection on a bracket
    found by doubling outwards from [-1, 1] V.

    Raises
    ------
    SolverError
        If no bracket containing the solution is found.
    """
    if isinstance(element, Resistor):
        return current / element.conductance
    if element.is_ohmic:
        params = element.params
        offset = 0.0 if params.phi == 1.0 else (1.0 - params.phi) * schottky_current(0.0, params.diode)
        return (current - offset) / (params.phi * element.state.g_m)

    def mismatch(v: float) -> float:
        return element_iv(element, v) - current

    low, high = -1.0, 1.0
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if mismatch(low) <= 0.0:
            break
        low *= 2.0
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if mismatch(high) >= 0.0:
            break
        high *= 2.0
    f_low, f_high = mismatch(low), mismatch(high)
    if f_low > 0.0 or f_high < 0.0:
        err = SolverError.bracket_failure("element voltage", current, low, high)
        logger.warning(str(err))
        raise err
    if f_low == 0.0:
        return low
    if f_high == 0.0:
        return high

    return bisect(mismatch, low, high, xtol=VOLTAGE_TOLERANCE, maxiter=SOLVER_MAX_ITERATIONS, disp=False)
