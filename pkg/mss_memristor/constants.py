"""Physical Constants and Defaults Shared by the Simulator."""
from scipy.constants import k as BOLTZMANN, e as ELEMENTARY_CHARGE

# Room temperature at which the logistic slope gives V_T of about 25.85 mV:
DEFAULT_TEMPERATURE = 300.0

# Default drive for the reference hysteresis regimes: 0.5 V sine at 500 Hz,
# sampled at 1 us for two full periods.
DEFAULT_AMPLITUDE = 0.5
DEFAULT_FREQUENCY = 500.0
DEFAULT_DT = 1e-6
DEFAULT_STEPS = 4000

# Auto sampler switches to the exact binomial below these bounds:
AUTO_EXACT_MAX_N = 128
AUTO_EXACT_MIN_VARIANCE = 9.0

# Series solver limits:
SOLVER_MAX_ITERATIONS = 60
SOLVER_CURRENT_TOLERANCE = 1e-12

# Tool version echoed into trace headers:
VERSION = "1.0.0"

# Largest 64-bit unsigned value accepted for seeds and stream ids:
MAX_U64 = 2 ** 64 - 1

__all__ = [
    "BOLTZMANN",
    "ELEMENTARY_CHARGE",
    "DEFAULT_TEMPERATURE",
    "DEFAULT_AMPLITUDE",
    "DEFAULT_FREQUENCY",
    "DEFAULT_DT",
    "DEFAULT_STEPS",
    "AUTO_EXACT_MAX_N",
    "AUTO_EXACT_MIN_VARIANCE",
    "SOLVER_MAX_ITERATIONS",
    "SOLVER_CURRENT_TOLERANCE",
    "MAX_U64",
    "VERSION",
]
