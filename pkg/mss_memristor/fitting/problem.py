"""Fit Problems, Optimizer Settings and Fit Results."""
from typing import Any, Dict, Mapping, Tuple, Union
from dataclasses import dataclass, field
from enum import Enum
from logging import getLogger
import math

from ..model import MssParams, CONTINUOUS_PARAMETERS
from ..trace import MeasuredTrace
from .errors import FitError

# pylint: disable=C0103
logger = getLogger(__name__)

# Fits always run the deterministic expected-count model.
FIT_MODE = "mean-field"


class LossKind(Enum):
    """Trace mismatch measure: RMSE in amperes, or RMSE divided by the standard deviation of the measured current."""

    RMSE = "rmse"
    NORMALIZED_RMSE = "normalized-rmse"

    @classmethod
    def parse(cls, value: Union[str, "LossKind"]) -> "LossKind":
        if isinstance(value, LossKind):
            return value
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            err = FitError.invalid_problem("loss", f"unknown loss kind {value!r}")
            logger.warning(str(err))
            raise err


class InitialStatePolicy(Enum):
    """Populations the scored simulation starts from.

    - BURN_IN: start half way, drive once through the whole measured record, discard it and score the second pass.
    - FIXED_FRACTION: start with half of the switches in A and score the first pass.
    """

    BURN_IN = "burn-in"
    FIXED_FRACTION = "fixed-fraction"

    @classmethod
    def parse(cls, value: Union[str, "InitialStatePolicy"]) -> "InitialStatePolicy":
        if isinstance(value, InitialStatePolicy):
            return value
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            err = FitError.invalid_problem("initial_state_policy", f"unknown policy {value!r}")
            logger.warning(str(err))
            raise err


@dataclass(frozen=True)
class NelderMead:
    """Nelder-Mead simplex search; `tol` is relative to the loss at the initial point."""

    max_iters: int = 2000
    tol: float = 1e-8


@dataclass(frozen=True)
class RandomSearch:
    """Uniform sampling of the bound box with a seeded stream; the best of `budget` candidates wins."""

    budget: int = 200
    seed: int = 0


Optimizer = Union[NelderMead, RandomSearch]


@dataclass(frozen=True, eq=False)
class FitProblem:
    """Parameters to recover from a measured trace.

    `initial` provides the fixed parameters and the starting point of the free ones; `free_params` maps each
    free (possibly dotted) parameter name to its (lower, upper) bounds. Every parameter not named there is fixed.

    Example usage:

    >>> problem = FitProblem(measured, get_preset("chalcogenide"), {"v_a": (0.05, 0.8), "v_b": (0.05, 0.8)})
    >>> result = fit(problem)
    """

    measured: MeasuredTrace
    initial: MssParams
    free_params: Mapping[str, Tuple[float, float]] = field(default_factory=dict)
    initial_state_policy: InitialStatePolicy = InitialStatePolicy.BURN_IN
    loss: LossKind = LossKind.RMSE
    optimizer: Optimizer = field(default_factory=NelderMead)

    def __post_init__(self) -> None:
        for name, bounds in self.free_params.items():
            if name not in CONTINUOUS_PARAMETERS:
                self._fail(name, f"not a continuous parameter, expected one of {', '.join(CONTINUOUS_PARAMETERS)}")
            if len(bounds) != 2:
                self._fail(name, f"bounds must be a (lower, upper) pair, got {bounds!r}")
            lower, upper = bounds
            if not (math.isfinite(lower) and math.isfinite(upper) and lower < upper):
                self._fail(name, f"bounds must be finite with lower < upper, got {bounds!r}")
            value = self.initial.get_value(name)
            if not lower <= value <= upper:
                self._fail(name, f"initial value {value} lies outside [{lower}, {upper}]")

        optimizer = self.optimizer
        if isinstance(optimizer, NelderMead):
            if optimizer.max_iters < 1 or not optimizer.tol > 0.0:
                self._fail("optimizer", "Nelder-Mead needs max_iters >= 1 and tol > 0")
        elif isinstance(optimizer, RandomSearch):
            if optimizer.budget < 1:
                self._fail("optimizer", "random search needs a budget >= 1")
        else:
            self._fail("optimizer", f"unknown optimizer {optimizer!r}")

    @staticmethod
    def _fail(name: str, details: str) -> None:
        err = FitError.invalid_problem(name, details)
        logger.warning(str(err))
        raise err

    @property
    def free_names(self) -> Tuple[str, ...]:
        return tuple(self.free_params)

    @property
    def fixed_names(self) -> Tuple[str, ...]:
        return tuple(name for name in ("n_switches",) + CONTINUOUS_PARAMETERS if name not in self.free_params)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a fit.

    `loss_history` holds the best loss found so far, starting at the initial point and extended once per
    optimizer iteration, so it never increases.
    """

    params: MssParams
    loss_value: float
    iterations: int
    converged: bool
    loss_history: Tuple[float, ...]
    evaluations: int
    free_names: Tuple[str, ...] = ()

    def to_report(self) -> Dict[str, Any]:
        """Plain dict for the YAML fit report."""
        return {
            "mode": FIT_MODE,
            "loss_value": self.loss_value,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "free_params": {name: self.params.get_value(name) for name in self.free_names},
            "params": self.params.to_dict(),
            "loss_history": list(self.loss_history),
        }
