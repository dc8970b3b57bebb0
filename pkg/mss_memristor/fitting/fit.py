"""Parameter Recovery from Measured I-V Traces.

The objective simulates the mean-field model driven by the measured voltage samples and compares the model
current with the measured one. The optimizer works in coordinates normalized to the bound box, where
coordinate `z` in [0, 1] maps to `lower + z * (upper - lower)`; reflected points outside the box are clipped
coordinate-wise.
"""
from typing import List, Tuple
from logging import getLogger
import math

import numpy as np
from scipy.optimize import minimize

from ..errors import MssModelError
from ..model import MssParams
from ..model.device import (
    FLOAT_MAX,
    mean_field_trajectory,
    total_current_array,
    transition_probability_arrays,
)
from ..stochastics import make_stream
from ..trace import Trace, MeasuredTrace
from .errors import FitError
from .problem import FIT_MODE, FitProblem, FitResult, InitialStatePolicy, LossKind, NelderMead

# pylint: disable=C0103
logger = getLogger(__name__)

# Initial simplex step: 5% of the initial coordinate, at least 1% of the bound width.
SIMPLEX_RELATIVE_STEP = 0.05
SIMPLEX_MIN_BOUND_FRACTION = 0.01


def measured_time_steps(t: np.ndarray) -> np.ndarray:
    """Step lengths of a measured record: `dt_k = t_k - t_{k-1}`, with `dt_0 = t_1 - t_0`."""
    steps = np.diff(t)
    return np.concatenate([steps[:1], steps])


def simulate_for_fit(
    params: MssParams, measured: MeasuredTrace, initial_state_policy: InitialStatePolicy = InitialStatePolicy.BURN_IN
) -> Trace:
    """
    Mean-field simulation driven by the measured voltage, sampled at the measured timestamps.

    Step k uses the voltage measured at `t_k` and the step length `t_k - t_{k-1}`.

    Raises
    ------
    MssModelError
        If a measured step is longer than `t_c` (PARAMETER kind).
    """
    dt = measured_time_steps(measured.t)
    p_a, p_b = transition_probability_arrays(measured.v, params, dt)

    n_a_initial = 0.5 * params.n_switches
    if initial_state_policy is InitialStatePolicy.BURN_IN:
        burn_in, _ = mean_field_trajectory(p_a, p_b, params, n_a_initial)
        n_a_initial = float(burn_in[-1])
    populations, conductance = mean_field_trajectory(p_a, p_b, params, n_a_initial)
    current = total_current_array(measured.v, conductance, params)

    metadata = {"mode": FIT_MODE, "source": measured.source}
    saturated = bool(np.any(np.abs(current) >= FLOAT_MAX))
    return Trace(measured.t, measured.v, current, conductance, populations, metadata, saturated=saturated)


def loss(model: Trace, measured: MeasuredTrace, kind: LossKind = LossKind.RMSE) -> float:
    """
    Current mismatch between a model trace and the measurement.

    RMSE is `sqrt(mean((i_model - i_measured)^2))`; the normalized RMSE divides it by the (population) standard
    deviation of the measured current.

    >>> value = loss(model, measured, LossKind.RMSE)

    Raises
    ------
    FitError
        LENGTH_MISMATCH if the traces are not aligned sample by sample; DEGENERATE_MEASUREMENT for a normalized
        loss against a constant measured current.
    """
    if len(model) != len(measured):
        err = FitError.length_mismatch(len(model), len(measured))
        logger.warning(str(err))
        raise err
    misaligned = np.nonzero(~np.isclose(model.t, measured.t, rtol=1e-12, atol=0.0))[0]
    if len(misaligned) > 0:
        err = FitError.misaligned_timestamps(int(misaligned[0]))
        logger.warning(str(err))
        raise err

    rmse = float(np.sqrt(np.mean((model.i - measured.i) ** 2)))
    if LossKind.parse(kind) is LossKind.RMSE:
        return rmse

    spread = float(np.std(measured.i))
    if spread == 0.0:
        err = FitError.degenerate_measurement()
        logger.warning(str(err))
        raise err
    return rmse / spread


class _Objective:
    """Loss as a function of normalized coordinates; remembers the best point ever evaluated."""

    def __init__(self, problem: FitProblem):
        self.problem = problem
        self.names = problem.free_names
        bounds = np.asarray([problem.free_params[name] for name in self.names], dtype=float).reshape(-1, 2)
        self.lower = bounds[:, 0]
        self.upper = bounds[:, 1]
        self.evaluations = 0
        self.scale = 1.0
        self.best_value = math.inf
        self.best_x = np.empty(0)

    def to_physical(self, z: np.ndarray) -> np.ndarray:
        x = self.lower + np.clip(z, 0.0, 1.0) * (self.upper - self.lower)
        return np.clip(x, self.lower, self.upper)

    def to_normalized(self, x: np.ndarray) -> np.ndarray:
        return (x - self.lower) / (self.upper - self.lower)

    def params_at(self, x: np.ndarray) -> MssParams:
        return self.problem.initial.with_named_values(dict(zip(self.names, x.tolist())))

    def evaluate(self, params: MssParams) -> float:
        problem = self.problem
        model = simulate_for_fit(params, problem.measured, problem.initial_state_policy)
        return loss(model, problem.measured, problem.loss)

    def physical(self, x: np.ndarray) -> float:
        """Unscaled loss at physical coordinates; non-finite values and model errors count as +inf."""
        self.evaluations += 1
        try:
            value = self.evaluate(self.params_at(x))
        except MssModelError as error:
            logger.debug("Objective rejected %s: %s", x, error)
            value = math.inf
        if not math.isfinite(value):
            value = math.inf
        if value < self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=float)
        return value

    def __call__(self, z: np.ndarray) -> float:
        return self.physical(self.to_physical(np.asarray(z, dtype=float))) / self.scale


def initial_simplex(lower: np.ndarray, upper: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """
    Initial simplex in normalized coordinates.

    Vertex j moves coordinate j by `max(5% of |x0_j|, 1% of the bound width)`, downwards if the step
    would leave the upper bound.
    """
    width = upper - lower
    z0 = (x0 - lower) / width
    simplex = np.tile(z0, (len(x0) + 1, 1))
    for j in range(len(x0)):
        step = max(SIMPLEX_RELATIVE_STEP * abs(x0[j]), SIMPLEX_MIN_BOUND_FRACTION * width[j])
        if x0[j] + step > upper[j]:
            step = -step
        simplex[j + 1, j] = np.clip(z0[j] + step / width[j], 0.0, 1.0)
    return simplex


def _nelder_mead(objective: _Objective, x0: np.ndarray, settings: NelderMead) -> Tuple[int, bool, List[float]]:
    history = [objective.best_value]

    def record(_: np.ndarray) -> None:
        history.append(objective.best_value)

    z0 = objective.to_normalized(x0)
    result = minimize(
        objective,
        z0,
        method="Nelder-Mead",
        bounds=[(0.0, 1.0)] * len(z0),
        callback=record,
        options={
            "maxiter": settings.max_iters,
            "xatol": settings.tol,
            "fatol": settings.tol,
            "initial_simplex": initial_simplex(objective.lower, objective.upper, x0),
        },
    )
    logger.debug("Nelder-Mead finished: %s", result.message)
    return int(result.nit), bool(result.success), history


def _random_search(objective: _Objective, budget: int, seed: int) -> Tuple[int, bool, List[float]]:
    stream = make_stream(seed, 0)
    history = [objective.best_value]
    for _ in range(budget):
        objective(stream.generator.random(len(objective.names)))
        history.append(objective.best_value)
    return budget, False, history


def fit(problem: FitProblem) -> FitResult:
    """
    Recovers the free parameters of `problem` by minimizing the loss over the mean-field model.

    The search is deterministic for a given problem. The returned point is the best ever evaluated; its loss
    is recomputed from a fresh simulation.

    Parameters
    ----------
    problem: FitProblem
        Measured trace, free parameters with bounds, loss and optimizer.

    Returns
    -------
    result: FitResult
        Best parameters, loss, iteration count, convergence flag and best-so-far loss history.
        `converged` is false when the Nelder-Mead budget ran out; a random search has no convergence test
        and always reports false.

    Raises
    ------
    FitError
        INITIALIZATION if the loss at the initial point is not finite, or the problem-level kinds raised by `loss`.
    """
    objective = _Objective(problem)

    try:
        initial_value = objective.evaluate(problem.initial)
    except MssModelError as error:
        err = FitError.initialization(math.nan, str(error))
        logger.warning(str(err))
        raise err
    objective.evaluations = 1
    if not math.isfinite(initial_value):
        err = FitError.initialization(initial_value)
        logger.warning(str(err))
        raise err

    if not problem.free_names or initial_value == 0.0:
        logger.info("Nothing to optimize, loss at the initial point is %s.", initial_value)
        return FitResult(problem.initial, initial_value, 0, True, (initial_value,), 1, problem.free_names)

    x0 = np.asarray([problem.initial.get_value(name) for name in problem.free_names], dtype=float)
    objective.scale = initial_value
    objective.best_value = initial_value
    objective.best_x = x0

    optimizer = problem.optimizer
    if isinstance(optimizer, NelderMead):
        iterations, converged, history = _nelder_mead(objective, x0, optimizer)
    else:
        iterations, converged, history = _random_search(objective, optimizer.budget, optimizer.seed)

    best_params = objective.params_at(objective.best_x)
    loss_value = objective.evaluate(best_params)

    logger.info(
        "Fit finished after %s iterations (%s evaluations): loss %s -> %s.",
        iterations,
        objective.evaluations,
        initial_value,
        loss_value,
    )
    return FitResult(
        best_params, loss_value, iterations, converged, tuple(history), objective.evaluations, problem.free_names
    )
