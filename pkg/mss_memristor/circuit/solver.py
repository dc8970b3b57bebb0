"""Series Circuit Solver.

Each step of a series circuit is solved at frozen device conductances:

1. Find the shared current `I` with `sum_k V_k(I) = v_applied`, where `V_k` inverts the element I-V curve.
   The current is bisected on `[min_k I_k(v/n), max_k I_k(v/n)]`, which always contains the solution
   because every `I_k` is strictly increasing.
2. Every element but the last takes `V_k(I)`; the last one takes the remainder, so the partition
   sums to `v_applied` exactly up to rounding.
3. Every device is advanced one step at its own voltage.
"""
from typing import List, Sequence, Tuple
from dataclasses import dataclass
from logging import getLogger

from scipy.optimize import bisect

from ..constants import SOLVER_MAX_ITERATIONS, SOLVER_CURRENT_TOLERANCE
from ..drivers import TimeGrid, WaveformSpec
from ..errors import MssModelError
from ..model import is_saturated
from .elements import Element, MssDevice, element_iv, element_voltage, is_strictly_increasing
from .errors import SolverError

# pylint: disable=C0103
logger = getLogger(__name__)

# Absolute bisection tolerance on the shared current; in practice the relative tolerance stops first.
CURRENT_XTOL = 1e-18


class SeriesCircuit:
    """Ordered chain of elements driven by one voltage source.

    Example usage:

    >>> circuit = SeriesCircuit([MssDevice(params), Resistor(1e-3)], Sine(0.5, 500.0), TimeGrid(1e-6, 4000))
    >>> result = solve_series_step(circuit, 0.3)
    >>> voltages = result.element_voltages
    """

    def __init__(self, elements: Sequence[Element], drive: WaveformSpec, grid: TimeGrid):
        if len(elements) == 0:
            err = SolverError.empty_circuit()
            logger.warning(str(err))
            raise err
        for device in (element for element in elements if isinstance(element, MssDevice)):
            if grid.dt > device.params.t_c:
                err = MssModelError.invalid_time_step(grid.dt, device.params.t_c)
                logger.warning(str(err))
                raise err

        self.elements: List[Element] = list(elements)
        self.drive = drive
        self.grid = grid

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def devices(self) -> List[MssDevice]:
        """MSS devices of the chain in circuit order."""
        return [element for element in self.elements if isinstance(element, MssDevice)]


@dataclass(frozen=True)
class CircuitStepResult:
    """Solution of one circuit step.

    `series_current` is the current solved at frozen conductances; `device_current` is the current of
    the first device after its state update (the series current if the chain has no device).
    """

    element_voltages: Tuple[float, ...]
    series_current: float
    kcl_residual: float
    device_current: float
    iterations: int
    saturated: bool


def _partition_error(current: float, elements: Sequence[Element], v_applied: float) -> float:
    return sum(element_voltage(element, current) for element in elements) - v_applied


def _solve_current(elements: Sequence[Element], v_applied: float) -> Tuple[float, int]:
    share = v_applied / len(elements)
    currents = [element_iv(element, share) for element in elements]
    low, high = min(currents), max(currents)
    if low == high:
        return low, 0

    f_low = _partition_error(low, elements, v_applied)
    f_high = _partition_error(high, elements, v_applied)
    # The bracket holds the root analytically; a wrong sign only comes from rounding at an endpoint.
    if f_low >= 0.0:
        return low, 0
    if f_high <= 0.0:
        return high, 0

    current, details = bisect(
        _partition_error,
        low,
        high,
        args=(elements, v_applied),
        xtol=CURRENT_XTOL,
        maxiter=SOLVER_MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    if not details.converged:
        logger.debug("Current bisection stopped after %s iterations at I = %s.", details.iterations, current)
    return current, details.iterations


def solve_series_voltages(elements: Sequence[Element], v_applied: float) -> Tuple[Tuple[float, ...], float, int]:
    """
    Solves the voltage partition of a series chain at frozen state, without advancing any device.

    Returns
    -------
    (element_voltages, current, iterations): Tuple[Tuple[float, ...], float, int]

    Raises
    ------
    SolverError
        If the chain is empty, an element I(V) is not strictly increasing or a bracket cannot be found.
    """
    if len(elements) == 0:
        err = SolverError.empty_circuit()
        logger.warning(str(err))
        raise err
    for index, element in enumerate(elements):
        if not is_strictly_increasing(element):
            err = SolverError.non_monotone(index, element)
            logger.warning(str(err))
            raise err

    if len(elements) == 1:
        return (v_applied,), element_iv(elements[0], v_applied), 0

    current, iterations = _solve_current(elements, v_applied)
    voltages = [element_voltage(element, current) for element in elements[:-1]]
    voltages.append(v_applied - sum(voltages))
    return tuple(voltages), current, iterations


def solve_series_step(circuit: SeriesCircuit, v_applied: float) -> CircuitStepResult:
    """
    Solves one step of `circuit` at the applied voltage and advances every device at its solved voltage.

    Parameters
    ----------
    circuit: SeriesCircuit
        Circuit to step; its devices are updated in place.
    v_applied: float
        Source voltage for this step, volts.

    Returns
    -------
    result: CircuitStepResult
        Element voltages, series current and KCL residual of the solve, plus the post-step device current.

    Raises
    ------
    SolverError
        See `solve_series_voltages`.
    MssModelError
        If a device update fails.
    """
    elements = circuit.elements
    voltages, current, iterations = solve_series_voltages(elements, v_applied)

    element_currents = [element_iv(element, v) for element, v in zip(elements, voltages)]
    kcl_residual = max(element_currents) - min(element_currents)
    if kcl_residual >= SOLVER_CURRENT_TOLERANCE:
        logger.debug("KCL residual %s A at v_applied = %s V exceeds the tolerance.", kcl_residual, v_applied)
    saturated = any(is_saturated(value) for value in element_currents)

    device_current = current
    first_device = True
    for element, v in zip(elements, voltages):
        if isinstance(element, MssDevice):
            element.advance(v, circuit.grid.dt)
            if first_device:
                device_current = element.current(v)
                first_device = False

    saturated = saturated or is_saturated(device_current)
    return CircuitStepResult(voltages, current, kcl_residual, device_current, iterations, saturated)
