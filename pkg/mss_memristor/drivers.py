"""Voltage Drive Waveforms and the Fixed-Step Time Grid.

Waveforms are immutable descriptions evaluated analytically at any time `t >= 0`:

>>> drive = Sine(amplitude=0.5, frequency=500.0)
>>> waveform_value(drive, 0.5e-3)
0.5

Periodic waveforms reduce time to the phase within the current period before evaluating, so values
at `t` and `t + k / frequency` agree to rounding.
"""
from typing import Any, Dict, Sequence, Tuple, Union
from dataclasses import dataclass, asdict
from enum import Enum
from logging import getLogger
import math

import numpy as np

from .errors import MssModelError

# pylint: disable=C0103
logger = getLogger(__name__)


def _require(condition: bool, name: str, value: Any, constraint: str) -> None:
    if not condition:
        err = MssModelError.invalid_parameter(name, value, constraint)
        logger.warning(str(err))
        raise err


def _finite(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _cycles(t: float, frequency: float) -> float:
    cycles = t * frequency
    return cycles - math.floor(cycles)


@dataclass(frozen=True)
class Sine:
    """`offset + amplitude * sin(2 pi f t + phase)`."""

    amplitude: float
    frequency: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("amplitude", "phase", "offset"):
            _require(_finite(getattr(self, name)), name, getattr(self, name), "finite value")
        _require(_finite(self.frequency) and self.frequency > 0.0, "frequency", self.frequency, "> 0")

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def value(self, t: float) -> float:
        return self.offset + self.amplitude * math.sin(2.0 * math.pi * _cycles(t, self.frequency) + self.phase)


@dataclass(frozen=True)
class Triangle:
    """Symmetric triangle through `offset` at t = 0, rising first, peaks at a quarter period."""

    amplitude: float
    frequency: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        for name in ("amplitude", "offset"):
            _require(_finite(getattr(self, name)), name, getattr(self, name), "finite value")
        _require(_finite(self.frequency) and self.frequency > 0.0, "frequency", self.frequency, "> 0")

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def value(self, t: float) -> float:
        phase = _cycles(t, self.frequency)
        if phase < 0.25:
            shape = 4.0 * phase
        elif phase < 0.75:
            shape = 2.0 - 4.0 * phase
        else:
            shape = 4.0 * phase - 4.0
        return self.offset + self.amplitude * shape


@dataclass(frozen=True)
class PulseTrain:
    """`count` rectangular pulses of `high` volts lasting `width`, repeated every `period`; `low` otherwise."""

    high: float
    low: float
    width: float
    period: float
    count: int

    def __post_init__(self) -> None:
        for name in ("high", "low"):
            _require(_finite(getattr(self, name)), name, getattr(self, name), "finite value")
        _require(_finite(self.width) and self.width > 0.0, "width", self.width, "> 0")
        _require(_finite(self.period) and self.period > self.width, "period", self.period, "> width")
        _require(
            isinstance(self.count, int) and not isinstance(self.count, bool) and self.count >= 1,
            "count",
            self.count,
            "integer >= 1",
        )

    def value(self, t: float) -> float:
        if t < 0.0:
            return self.low
        index = math.floor(t / self.period)
        if index >= self.count:
            return self.low
        return self.high if t - index * self.period < self.width else self.low


class Interpolation(Enum):
    """Interpolation between Piecewise points."""

    HOLD = "hold"
    LINEAR = "linear"


@dataclass(frozen=True)
class Piecewise:
    """Voltage through the given (t, v) points.

    Queries before the first point return the first value, queries after the last point the last value.
    """

    points: Tuple[Tuple[float, float], ...]
    interpolation: Interpolation = Interpolation.LINEAR

    def __post_init__(self) -> None:
        _require(len(self.points) >= 1, "points", len(self.points), "at least one point")
        for index, point in enumerate(self.points):
            _require(
                len(point) == 2 and _finite(point[0]) and _finite(point[1]),
                f"points[{index}]",
                point,
                "finite (t, v) pair",
            )
        times = [point[0] for point in self.points]
        _require(
            all(later > earlier for earlier, later in zip(times, times[1:])), "points", times, "strictly increasing t"
        )

    @classmethod
    def from_samples(
        cls, times: Sequence[float], volts: Sequence[float], interpolation: Interpolation = Interpolation.LINEAR
    ) -> "Piecewise":
        return cls(tuple(zip((float(t) for t in times), (float(v) for v in volts))), interpolation)

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        points = np.asarray(self.points, dtype=float)
        return points[:, 0], points[:, 1]

    def value(self, t: float) -> float:
        return float(self.values(np.asarray([t], dtype=float))[0])

    def values(self, times: np.ndarray) -> np.ndarray:
        knots, volts = self._arrays()
        if self.interpolation is Interpolation.LINEAR:
            return np.interp(times, knots, volts)
        index = np.searchsorted(knots, times, side="right") - 1
        return volts[np.clip(index, 0, len(volts) - 1)]


@dataclass(frozen=True)
class Dc:
    """Constant voltage."""

    v: float

    def __post_init__(self) -> None:
        _require(_finite(self.v), "v", self.v, "finite value")

    def value(self, t: float) -> float:
        # pylint: disable=unused-argument
        return self.v


WaveformSpec = Union[Sine, Triangle, PulseTrain, Piecewise, Dc]

_WAVEFORM_TYPES = {"sine": Sine, "triangle": Triangle, "pulse": PulseTrain, "piecewise": Piecewise, "dc": Dc}


def waveform_name(spec: WaveformSpec) -> str:
    """Config name of the waveform variant."""
    for name, waveform_type in _WAVEFORM_TYPES.items():
        if isinstance(spec, waveform_type):
            return name
    raise TypeError(f"Unknown waveform type: {type(spec).__name__}")


def waveform_types() -> Dict[str, type]:
    return dict(_WAVEFORM_TYPES)


def waveform_to_dict(spec: WaveformSpec) -> Dict[str, Any]:
    """Flat description of the waveform, used for trace headers."""
    description: Dict[str, Any] = {"type": waveform_name(spec)}
    for key, value in asdict(spec).items():
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, tuple):
            value = [list(point) for point in value]
        description[key] = value
    return description


def waveform_value(spec: WaveformSpec, t: float) -> float:
    """
    Evaluates the drive at time `t` (seconds).

    Raises
    ------
    MssModelError
        If `t` is not finite (DOMAIN kind).
    """
    if not math.isfinite(t):
        err = MssModelError.non_finite("t", t)
        logger.warning(str(err))
        raise err

    return spec.value(t)


def waveform_values(spec: WaveformSpec, times: np.ndarray) -> np.ndarray:
    """Evaluates the drive at every time of `times`."""
    if isinstance(spec, Piecewise):
        return spec.values(np.asarray(times, dtype=float))
    return np.fromiter((waveform_value(spec, float(t)) for t in times), dtype=float, count=len(times))


@dataclass(frozen=True)
class TimeGrid:
    """Fixed-step grid `t_k = t_start + k * dt`, k = 0 .. n_steps - 1.

    Times are computed from the step index, never accumulated.
    """

    dt: float
    n_steps: int
    t_start: float = 0.0

    def __post_init__(self) -> None:
        _require(_finite(self.dt) and self.dt > 0.0, "dt", self.dt, "> 0")
        _require(
            isinstance(self.n_steps, int) and not isinstance(self.n_steps, bool) and self.n_steps >= 1,
            "n_steps",
            self.n_steps,
            "integer >= 1",
        )
        _require(_finite(self.t_start) and self.t_start >= 0.0, "t_start", self.t_start, ">= 0")

    def time(self, index: int) -> float:
        return self.t_start + index * self.dt

    def times(self) -> np.ndarray:
        return self.t_start + np.arange(self.n_steps) * self.dt

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt
