"""Hysteresis Loop Analysis of I-V Traces."""
from typing import List, Tuple
from logging import getLogger

import numpy as np

from .trace import Trace

# pylint: disable=C0103
logger = getLogger(__name__)


def signed_loop_area(v: np.ndarray, i: np.ndarray) -> float:
    """Shoelace area of the closed polygon through the (v, i) samples (positive when counter-clockwise)."""
    v = np.asarray(v, dtype=float)
    i = np.asarray(i, dtype=float)
    if len(v) < 3:
        return 0.0
    return 0.5 * float(np.dot(v, np.roll(i, -1)) - np.dot(np.roll(v, -1), i))


def _lobes(v: np.ndarray) -> List[Tuple[int, int]]:
    # Lobes are the runs of samples between sign changes of v; each run includes the crossing samples.
    signs = np.sign(v)
    nonzero = np.nonzero(signs)[0]
    if len(nonzero) == 0:
        return []
    bounds = [0]
    previous = signs[nonzero[0]]
    for index in nonzero[1:]:
        if signs[index] != previous:
            bounds.append(int(index))
            previous = signs[index]
    bounds.append(len(v))
    return [(max(start - 1, 0), min(stop + 1, len(v))) for start, stop in zip(bounds, bounds[1:])]


def loop_area(v: np.ndarray, i: np.ndarray) -> float:
    """
    Hysteresis strength of an I-V loop: the sum of the absolute shoelace areas of its lobes.

    A pinched loop has one lobe per voltage polarity, traversed in opposite directions, so the signed
    area of the whole loop cancels between them; summing lobe magnitudes does not.
    """
    v = np.asarray(v, dtype=float)
    i = np.asarray(i, dtype=float)
    return sum(abs(signed_loop_area(v[start:stop], i[start:stop])) for start, stop in _lobes(v))


def steady_state_period(trace: Trace, period: float) -> Trace:
    """Last full drive period of `trace` (samples with t in [t_end - period, t_end])."""
    samples = int(round(period / (trace.t[1] - trace.t[0]))) if len(trace) > 1 else 1
    samples = min(samples, len(trace))
    logger.debug("Using the last %s samples as the steady-state period.", samples)
    return trace.slice(len(trace) - samples, len(trace))


def pinch_currents(trace: Trace, v_tolerance: float = 1e-9) -> np.ndarray:
    """Currents at the samples where |V| is below `v_tolerance` (the zero crossings of the drive)."""
    return trace.i[np.abs(trace.v) < v_tolerance]


def trace_loop_area(trace: Trace) -> float:
    """`loop_area` of a trace."""
    return loop_area(trace.v, trace.i)
