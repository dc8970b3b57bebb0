"""Fitting of MSS Parameters to Measured I-V Traces.

Example usage:

>>> from mss_memristor.fitting import FitProblem, fit
>>> problem = FitProblem(measured, initial_params, {"v_a": (0.05, 0.8), "v_b": (0.05, 0.8)})
>>> result = fit(problem)
>>> best_v_a, best_v_b = result.params.v_a, result.params.v_b
"""
from .problem import FitProblem, FitResult, LossKind, InitialStatePolicy, NelderMead, RandomSearch, Optimizer
from .fit import fit, loss, simulate_for_fit, measured_time_steps
from .errors import FitError
