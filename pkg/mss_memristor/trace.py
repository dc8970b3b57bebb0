"""Simulation Traces and Measured I-V Records."""
from typing import Dict, Optional, Sequence
from logging import getLogger

import numpy as np

from .formats.errors import TraceFormatError

# pylint: disable=C0103
logger = getLogger(__name__)

TRACE_COLUMNS = ("t", "v", "i", "g", "n_a")

MIN_MEASURED_SAMPLES = 10


def _is_strictly_increasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) > 0.0))


class Trace:
    """Time series of (t, V, I, G, N_A) samples produced by a simulation.

    `metadata` holds the header echoed into CSV files (parameters, seed, mode, tool version);
    `element_voltages` has one column per circuit element for multi-element circuits;
    `saturated` is raised if the Schottky branch saturated anywhere in the run.
    """

    def __init__(
        self,
        t: Sequence[float],
        v: Sequence[float],
        i: Sequence[float],
        g: Sequence[float],
        n_a: Sequence[float],
        metadata: Optional[Dict[str, str]] = None,
        element_voltages: Optional[np.ndarray] = None,
        saturated: bool = False,
        integer_populations: bool = False,
    ):
        self.t = np.asarray(t, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.i = np.asarray(i, dtype=float)
        self.g = np.asarray(g, dtype=float)
        self.n_a = np.asarray(n_a, dtype=float)
        self.metadata: Dict[str, str] = dict(metadata or {})
        self.element_voltages = None if element_voltages is None else np.asarray(element_voltages, dtype=float)
        self.saturated = saturated
        self.integer_populations = integer_populations

        lengths = {len(column) for column in (self.t, self.v, self.i, self.g, self.n_a)}
        if len(lengths) != 1:
            err = TraceFormatError.validation(f"trace columns have different lengths: {sorted(lengths)}")
            logger.warning(str(err))
            raise err
        if self.element_voltages is not None and self.element_voltages.shape[0] != len(self.t):
            err = TraceFormatError.validation("element voltages do not match the number of samples")
            logger.warning(str(err))
            raise err
        if not _is_strictly_increasing(self.t):
            err = TraceFormatError.validation("trace timestamps are not strictly increasing")
            logger.warning(str(err))
            raise err

    def __len__(self) -> int:
        return len(self.t)

    def slice(self, start: int, stop: int) -> "Trace":
        """Sub-trace of samples [start, stop)."""
        voltages = None if self.element_voltages is None else self.element_voltages[start:stop]
        return Trace(
            self.t[start:stop],
            self.v[start:stop],
            self.i[start:stop],
            self.g[start:stop],
            self.n_a[start:stop],
            self.metadata,
            voltages,
            self.saturated,
            self.integer_populations,
        )


class MeasuredTrace:
    """Measured (t, V, I) samples of a device, the target of a fit.

    Timestamps must be strictly increasing and there must be at least 10 samples.
    """

    def __init__(self, t: Sequence[float], v: Sequence[float], i: Sequence[float], source: str = ""):
        self.t = np.asarray(t, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.i = np.asarray(i, dtype=float)
        self.source = source

        if not len(self.t) == len(self.v) == len(self.i):
            err = TraceFormatError.validation("measured columns t, v, i have different lengths")
            logger.warning(str(err))
            raise err
        if len(self.t) < MIN_MEASURED_SAMPLES:
            err = TraceFormatError.validation(
                f"measured trace has {len(self.t)} samples, at least {MIN_MEASURED_SAMPLES} are required"
            )
            logger.warning(str(err))
            raise err
        if not np.all(np.isfinite(self.t) & np.isfinite(self.v) & np.isfinite(self.i)):
            err = TraceFormatError.validation("measured trace contains non-finite values")
            logger.warning(str(err))
            raise err
        if not _is_strictly_increasing(self.t):
            err = TraceFormatError.validation("measured timestamps are not strictly increasing")
            logger.warning(str(err))
            raise err

    def __len__(self) -> int:
        return len(self.t)

    @classmethod
    def from_trace(cls, trace: Trace, source: str = "simulated trace") -> "MeasuredTrace":
        """Uses a simulated trace as a measurement (self-recovery experiments)."""
        return cls(trace.t, trace.v, trace.i, source)
