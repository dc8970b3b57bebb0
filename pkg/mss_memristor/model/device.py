"""Generalized MSS Device Equations.

The device current blends a memory branch and a Schottky branch:

```text
I = phi * I_m(V, t) + (1 - phi) * I_s(V)
I_s = alpha_f * exp(beta_f * V) - alpha_r * exp(-beta_r * V)
I_m = V * (G_m + dG_m)
G_m = N_A * g_a + N_B * g_b
```

The memory branch is a population of N metastable switches. Per step of length dt a switch in B moves to A
with probability `P_A = alpha * Gamma(V, V_A)` and a switch in A moves to B with probability
`P_B = alpha * (1 - Gamma(V, -V_B))`, where `alpha = dt / t_c` and `Gamma(V, V0) = 1 / (1 + exp(beta * (V - V0)))`.

Each step computes the probabilities from the voltage at the start of the step, updates the populations,
recomputes G_m from the populations and reports the conductance increment as the exact difference.
"""
from typing import Tuple, Union
from dataclasses import dataclass
from logging import getLogger
import math
import sys

import numpy as np
from scipy.special import expit

from ..errors import MssModelError
from ..stochastics import RandomStream, SamplerMode, sample_transitions
from .params import MssParams, DiodeParams

# pylint: disable=C0103
logger = getLogger(__name__)

FLOAT_MAX = sys.float_info.max

Population = Union[int, float]


@dataclass(frozen=True)
class DeviceState:
    """Switch populations and the cached device conductance.

    Stochastic simulations keep integer populations; the mean-field mode keeps real-valued ones.
    In both cases `n_a + n_b == N`.
    """

    n_a: Population
    n_b: Population
    g_m: float

    @classmethod
    def from_populations(cls, n_a: Population, params: MssParams, fractional: bool = False) -> "DeviceState":
        """Builds a state with `n_a` switches in A and the rest in B."""
        if fractional:
            n_a = float(n_a)
            n_b: Population = float(params.n_switches) - n_a
        else:
            n_a = int(n_a)
            n_b = params.n_switches - n_a
        state = cls(n_a, n_b, 0.0)
        return cls(n_a, n_b, device_conductance(state, params))

    @classmethod
    def initial(cls, params: MssParams, fraction_a: float = 0.5, fractional: bool = False) -> "DeviceState":
        """State with a `fraction_a` share of the switches in A (rounded to the nearest count unless fractional)."""
        if not 0.0 <= fraction_a <= 1.0:
            err = MssModelError.invalid_parameter("initial_fraction_a", fraction_a, "0 <= fraction <= 1")
            logger.warning(str(err))
            raise err
        if fractional:
            return cls.from_populations(fraction_a * params.n_switches, params, fractional=True)
        return cls.from_populations(int(round(fraction_a * params.n_switches)), params)

    @property
    def is_fractional(self) -> bool:
        return isinstance(self.n_a, float)

    def validate(self, params: MssParams) -> None:
        """Checks the population invariants against `params`."""
        n_switches = params.n_switches
        if self.is_fractional:
            valid = (
                0.0 <= self.n_a <= n_switches
                and 0.0 <= self.n_b <= n_switches
                and abs(self.n_a + self.n_b - n_switches) <= 1e-9 * n_switches
            )
        else:
            valid = self.n_a >= 0 and self.n_b >= 0 and self.n_a + self.n_b == n_switches
        if not valid:
            err = MssModelError.state_violation(self.n_a, self.n_b, n_switches)
            logger.warning(str(err))
            raise err


@dataclass(frozen=True)
class TransitionProbabilities:
    """Per-step transition probabilities.

    `p_a` is the B -> A probability, `p_b` the A -> B one; both lie in [0, alpha], alpha = dt / t_c <= 1.
    """

    p_a: float
    p_b: float
    alpha: float
    beta: float


def _check_voltage(name: str, value: float) -> None:
    if not math.isfinite(value):
        err = MssModelError.non_finite(name, value)
        logger.warning(str(err))
        raise err


def _check_time_step(dt: float, t_c: float) -> None:
    if not math.isfinite(dt) or not 0.0 < dt <= t_c:
        err = MssModelError.invalid_time_step(dt, t_c)
        logger.warning(str(err))
        raise err


def logistic_gamma(v: float, v_th: float, beta: float) -> float:
    """
    Logistic switching term `1 / (1 + exp(beta * (v - v_th)))`.

    Evaluated through `scipy.special.expit`, so it saturates to 0 or 1 instead of overflowing.

    Raises
    ------
    MssModelError
        If an input is not finite or `beta` is not positive (DOMAIN kind).
    """
    _check_voltage("v", v)
    _check_voltage("v_th", v_th)
    _check_voltage("beta", beta)
    if beta <= 0.0:
        err = MssModelError.out_of_domain("beta", beta, "> 0")
        logger.warning(str(err))
        raise err

    return float(expit(-beta * (v - v_th)))


def transition_probabilities(v: float, params: MssParams, dt: float) -> TransitionProbabilities:
    """
    Computes P_A and P_B for a step of length `dt` at voltage `v`.

    Parameters
    ----------
    v: float
        Voltage across the device at the start of the step, volts.
    params: MssParams
        Device parameters (temperature sets beta = q / kT).
    dt: float
        Step length, 0 < dt <= t_c.

    Raises
    ------
    MssModelError
        If `dt` is not in (0, t_c] (PARAMETER kind) or `v` is not finite (DOMAIN kind).
    """
    _check_voltage("v", v)
    _check_time_step(dt, params.t_c)

    alpha = dt / params.t_c
    beta = params.beta
    p_a = alpha * logistic_gamma(v, params.v_a, beta)
    # 1 - Gamma(v, -V_B) written as its exact complement to keep small probabilities representable:
    p_b = alpha * float(expit(beta * (v + params.v_b)))

    return TransitionProbabilities(p_a, p_b, alpha, beta)


def _exponential_branch(magnitude: float, exponent: float) -> float:
    if magnitude == 0.0:
        return 0.0
    try:
        value = magnitude * math.exp(exponent)
    except OverflowError:
        return FLOAT_MAX
    return min(value, FLOAT_MAX)


def schottky_current(v: float, diode: DiodeParams) -> float:
    """
    Schottky branch current `alpha_f * exp(beta_f * v) - alpha_r * exp(-beta_r * v)`.

    Overflowing exponentials saturate to the largest finite float with the correct sign;
    see `is_saturated`.
    """
    _check_voltage("v", v)

    forward = _exponential_branch(diode.alpha_f, diode.beta_f * v)
    reverse = _exponential_branch(diode.alpha_r, -diode.beta_r * v)
    return min(max(forward - reverse, -FLOAT_MAX), FLOAT_MAX)


def is_saturated(current: float) -> bool:
    """True if `current` hit the saturation bound of `schottky_current`."""
    return abs(current) >= FLOAT_MAX


def device_conductance(state: DeviceState, params: MssParams) -> float:
    """
    Device conductance `n_a * g_a + n_b * g_b` (siemens).

    Raises
    ------
    MssModelError
        If the state violates the population invariants (STATE kind).
    """
    state.validate(params)

    n_switches = params.n_switches
    conductance = params.g_a_total * (state.n_a / n_switches) + params.g_b_total * (state.n_b / n_switches)
    lower, upper = params.conductance_range
    return min(max(conductance, lower), upper)


def step_stochastic(
    state: DeviceState,
    v: float,
    dt: float,
    params: MssParams,
    rng: RandomStream,
    sampler_mode: SamplerMode = SamplerMode.AUTO,
) -> Tuple[DeviceState, float]:
    """
    Advances integer populations by one step, drawing the transition counts from `rng`.

    B -> A transitions are drawn first, then A -> B. Draws are confined to their source populations,
    so `n_a + n_b == N` holds by construction.

    Returns
    -------
    (state, delta_g): Tuple[DeviceState, float]
        New state and the conductance increment `g_m_new - g_m_old`.
    """
    probabilities = transition_probabilities(v, params, dt)

    to_a = sample_transitions(state.n_b, probabilities.p_a, rng, sampler_mode)
    to_b = sample_transitions(state.n_a, probabilities.p_b, rng, sampler_mode)

    new_state = DeviceState.from_populations(state.n_a + to_a - to_b, params)
    return new_state, new_state.g_m - state.g_m


def step_expected(state: DeviceState, v: float, dt: float, params: MssParams) -> Tuple[DeviceState, float]:
    """
    Mean-field step: transition counts are replaced by their expectations `n * p`.

    Populations are real numbers and stay within [0, N]. Used as the deterministic oracle of the stochastic
    model and as the fitting backend.
    """
    probabilities = transition_probabilities(v, params, dt)
    n_a = _expected_update(float(state.n_a), float(params.n_switches), probabilities.p_a, probabilities.p_b)

    new_state = DeviceState.from_populations(n_a, params, fractional=True)
    return new_state, new_state.g_m - state.g_m


def _expected_update(n_a: float, n_switches: float, p_a: float, p_b: float) -> float:
    n_b = n_switches - n_a
    n_a = n_a + n_b * p_a - n_a * p_b
    return min(max(n_a, 0.0), n_switches)


def total_current(v: float, state: DeviceState, delta_g: float, params: MssParams) -> float:
    """
    Device current `phi * v * (g_m_old + delta_g) + (1 - phi) * I_s(v)`.

    `state` is the post-step state and `delta_g` the increment returned by the same step,
    so `g_m_old + delta_g` is the post-step conductance `state.g_m`.
    """
    _check_voltage("v", v)
    if not math.isfinite(delta_g):
        err = MssModelError.non_finite("delta_g", delta_g)
        logger.warning(str(err))
        raise err

    memory = params.phi * v * state.g_m
    if params.phi == 1.0:
        return memory
    return memory + (1.0 - params.phi) * schottky_current(v, params.diode)


def transition_probability_arrays(
    v: np.ndarray, params: MssParams, dt: Union[float, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized `transition_probabilities` over a voltage record; returns (p_a, p_b) arrays."""
    v = np.asarray(v, dtype=float)
    dt_array = np.broadcast_to(np.asarray(dt, dtype=float), v.shape)
    if not np.all(np.isfinite(v)):
        err = MssModelError.non_finite("v", "array with non-finite samples")
        logger.warning(str(err))
        raise err
    if not np.all((dt_array > 0.0) & (dt_array <= params.t_c)):
        err = MssModelError.invalid_time_step(float(np.max(dt_array)), params.t_c)
        logger.warning(str(err))
        raise err

    alpha = dt_array / params.t_c
    beta = params.beta
    p_a = alpha * expit(-beta * (v - params.v_a))
    p_b = alpha * expit(beta * (v + params.v_b))
    return p_a, p_b


def schottky_current_array(v: np.ndarray, diode: DiodeParams) -> np.ndarray:
    """Vectorized `schottky_current` with the same saturation rule."""
    v = np.asarray(v, dtype=float)

    def _branch(magnitude: float, exponent: np.ndarray) -> np.ndarray:
        if magnitude == 0.0:
            return np.zeros_like(exponent)
        with np.errstate(over="ignore"):
            return np.minimum(magnitude * np.exp(exponent), FLOAT_MAX)

    forward = _branch(diode.alpha_f, diode.beta_f * v)
    reverse = _branch(diode.alpha_r, -diode.beta_r * v)
    return np.clip(forward - reverse, -FLOAT_MAX, FLOAT_MAX)


def mean_field_trajectory(
    p_a: np.ndarray, p_b: np.ndarray, params: MssParams, n_a_initial: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Iterates `step_expected` over precomputed probabilities.

    Returns
    -------
    (n_a, g_m): Tuple[np.ndarray, np.ndarray]
        Post-step population in A and device conductance for every step.
    """
    n_switches = float(params.n_switches)
    n_a = float(n_a_initial)
    populations = np.empty(len(p_a))
    for index, (prob_a, prob_b) in enumerate(zip(p_a.tolist(), p_b.tolist())):
        n_a = _expected_update(n_a, n_switches, prob_a, prob_b)
        populations[index] = n_a

    lower, upper = params.conductance_range
    conductance = params.g_a_total * (populations / n_switches) + params.g_b_total * (
        (n_switches - populations) / n_switches
    )
    return populations, np.clip(conductance, lower, upper)


def total_current_array(v: np.ndarray, g_m: np.ndarray, params: MssParams) -> np.ndarray:
    """Vectorized `total_current` given post-step conductances."""
    v = np.asarray(v, dtype=float)
    memory = params.phi * v * g_m
    if params.phi == 1.0:
        return memory
    return memory + (1.0 - params.phi) * schottky_current_array(v, params.diode)
