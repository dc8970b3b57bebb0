"""Seedable Random Streams and the Transition-Count Sampler.

Every stochastic simulation lane owns a RandomStream. A stream is identified by a (seed, stream_id) pair
and always produces the same draws for the same pair, on every platform: the generator is numpy's PCG64
seeded from `seed` and advanced by `stream_id` jumps (each jump is 2^127 steps), so streams of one seed
never overlap in practice.

The number of switches leaving a population of `n` in one step is Binomial(n, p). The sampler draws it either
exactly, or through the normal approximation N(np, np(1-p)) rounded to the nearest count and clamped to [0, n].
"""
from typing import Any, Optional, Union
from enum import Enum
from logging import getLogger
import math
import operator

import numpy as np

from .constants import AUTO_EXACT_MAX_N, AUTO_EXACT_MIN_VARIANCE, MAX_U64
from .errors import MssModelError

# pylint: disable=C0103
logger = getLogger(__name__)


def _check_u64(name: str, value: Any) -> int:
    try:
        number = operator.index(value)
    except TypeError:
        number = -1
    if isinstance(value, bool) or not 0 <= number <= MAX_U64:
        err = MssModelError.invalid_parameter(name, value, "64-bit unsigned integer")
        logger.warning(str(err))
        raise err
    return number


class RandomStream:
    """Deterministic random stream.

    Example usage:

    >>> stream = make_stream(seed=42, stream_id=0)
    >>> switched = stream.binomial(1000, 0.3)
    >>> raw = stream.next_uint64()

    A stream is single-owner: create one per parallel lane instead of sharing it.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = _check_u64("seed", seed)
        self.stream_id = _check_u64("stream_id", stream_id)
        self._generator = np.random.Generator(np.random.PCG64(self.seed).jumped(self.stream_id))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy generator (for vectorized draws)."""
        return self._generator

    def next_uint64(self) -> int:
        """Next raw 64-bit output of the bit generator."""
        return int(self._generator.bit_generator.random_raw())

    def random(self) -> float:
        """Uniform draw from [0, 1)."""
        return float(self._generator.random())

    def binomial(self, n: int, p: float) -> int:
        return int(self._generator.binomial(n, p))

    def normal(self, mean: float, std: float) -> float:
        return float(self._generator.normal(mean, std))


def make_stream(seed: int, stream_id: int = 0) -> RandomStream:
    """Creates the stream identified by (seed, stream_id)."""
    return RandomStream(seed, stream_id)


class SamplerMode(Enum):
    """How transition counts are drawn.

    - EXACT_BINOMIAL: Binomial(n, p) exactly.
    - NORMAL_APPROX: Normal(np, np(1 - p)), rounded to the nearest integer and clamped to [0, n].
    - AUTO: exact when n <= 128 or np(1 - p) < 9, normal approximation otherwise.
    """

    EXACT_BINOMIAL = "exact"
    NORMAL_APPROX = "normal"
    AUTO = "auto"

    @classmethod
    def parse(cls, value: Union[str, "SamplerMode"]) -> "SamplerMode":
        """Parses a mode from its config name ("exact", "normal", "auto")."""
        if isinstance(value, SamplerMode):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            err = MssModelError.invalid_parameter("sampler", value, "one of 'exact', 'normal', 'auto'")
            logger.warning(str(err))
            raise err

    def resolve(self, n: int, p: float) -> "SamplerMode":
        """Concrete mode used for a draw from Binomial(n, p)."""
        if self is not SamplerMode.AUTO:
            return self
        if n <= AUTO_EXACT_MAX_N or n * p * (1.0 - p) < AUTO_EXACT_MIN_VARIANCE:
            return SamplerMode.EXACT_BINOMIAL
        return SamplerMode.NORMAL_APPROX


def sample_transitions(
    n: int, p: float, rng: RandomStream, mode: Optional[SamplerMode] = SamplerMode.AUTO
) -> int:
    """
    Draws the number of switches (out of `n`) that change state in one step.

    Parameters
    ----------
    n: int
        Size of the source population, n >= 0.
    p: float
        Per-switch transition probability, 0 <= p <= 1.
    rng: RandomStream
        Stream to draw from.
    mode: SamplerMode
        Sampler to use, AUTO by default.

    Returns
    -------
    count: int
        Number of transitions, always in [0, n].

    Raises
    ------
    MssModelError
        If `n` is negative or not an integer, or `p` is outside of [0, 1] (DOMAIN kind).
    """
    try:
        count = operator.index(n)
    except TypeError:
        count = -1
    if isinstance(n, bool) or count < 0:
        err = MssModelError.out_of_domain("n", n, "integer >= 0")
        logger.warning(str(err))
        raise err
    if not isinstance(p, (int, float, np.floating)) or not 0.0 <= p <= 1.0:
        err = MssModelError.out_of_domain("p", p, "0 <= p <= 1")
        logger.warning(str(err))
        raise err

    if count == 0 or p == 0.0:
        return 0
    if p == 1.0:
        return count

    concrete = (mode or SamplerMode.AUTO).resolve(count, p)
    if concrete is SamplerMode.EXACT_BINOMIAL:
        return rng.binomial(count, p)

    mean = count * p
    std = math.sqrt(mean * (1.0 - p))
    draw = int(np.rint(rng.normal(mean, std)))
    return min(max(draw, 0), count)
