"""Device Parameterization of the Generalized MSS Memristor."""
from typing import Any, Dict, Tuple
from dataclasses import dataclass, field, fields, replace, asdict
from logging import getLogger
import math

from ..constants import BOLTZMANN, ELEMENTARY_CHARGE, DEFAULT_TEMPERATURE
from ..errors import MssModelError

# pylint: disable=C0103
logger = getLogger(__name__)


def _check_finite(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        err = MssModelError.non_finite(name, value)
        logger.warning(str(err))
        raise err
    return float(value)


def _check(condition: bool, name: str, value: Any, constraint: str) -> None:
    if not condition:
        err = MssModelError.invalid_parameter(name, value, constraint)
        logger.warning(str(err))
        raise err


@dataclass(frozen=True)
class DiodeParams:
    """Coefficients of the Schottky branch `I_s = alpha_f * exp(beta_f * V) - alpha_r * exp(-beta_r * V)`.

    Magnitudes are in amperes, slopes in 1/V. A zero magnitude disables its branch.
    """

    alpha_f: float = 0.0
    beta_f: float = 0.0
    alpha_r: float = 0.0
    beta_r: float = 0.0

    def __post_init__(self) -> None:
        for item in fields(self):
            value = _check_finite(item.name, getattr(self, item.name))
            _check(value >= 0.0, item.name, value, ">= 0")

    @property
    def is_active(self) -> bool:
        """True if the branch conducts a voltage-dependent current."""
        return (self.alpha_f > 0.0 and self.beta_f > 0.0) or (self.alpha_r > 0.0 and self.beta_r > 0.0)


@dataclass(frozen=True)
class MssParams:
    """Full parameterization of one generalized MSS device.

    Conductances `g_a_total` and `g_b_total` are device-level values (all N switches in one state);
    the per-switch conductances are `g_a = g_a_total / N` and `g_b = g_b_total / N`.
    No ordering between them is enforced.

    Example:

    >>> params = MssParams(n_switches=1000, t_c=1e-4, g_a_total=2.125e-3, g_b_total=0.67e-3, v_a=0.27, v_b=0.37)
    >>> round(params.beta, 2)  # 1 / V_T at 300 K
    38.68
    """

    n_switches: int
    t_c: float
    g_a_total: float
    g_b_total: float
    v_a: float
    v_b: float
    phi: float = 1.0
    diode: DiodeParams = field(default_factory=DiodeParams)
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self) -> None:
        n_switches = self.n_switches
        _check(
            isinstance(n_switches, int) and not isinstance(n_switches, bool) and n_switches >= 1,
            "n_switches",
            n_switches,
            "integer >= 1",
        )
        _check(_check_finite("t_c", self.t_c) > 0.0, "t_c", self.t_c, "> 0")
        _check(_check_finite("g_a_total", self.g_a_total) > 0.0, "g_a_total", self.g_a_total, "> 0")
        _check(_check_finite("g_b_total", self.g_b_total) > 0.0, "g_b_total", self.g_b_total, "> 0")
        _check_finite("v_a", self.v_a)
        _check_finite("v_b", self.v_b)
        _check(0.0 <= _check_finite("phi", self.phi) <= 1.0, "phi", self.phi, "0 <= phi <= 1")
        _check(_check_finite("temperature", self.temperature) > 0.0, "temperature", self.temperature, "> 0")
        _check(isinstance(self.diode, DiodeParams), "diode", self.diode, "DiodeParams instance")
        _check(math.isfinite(self.g_a) and self.g_a > 0.0, "g_a_total", self.g_a_total, "finite positive g_a")
        _check(math.isfinite(self.g_b) and self.g_b > 0.0, "g_b_total", self.g_b_total, "finite positive g_b")

    @property
    def g_a(self) -> float:
        """Per-switch conductance in state A."""
        return self.g_a_total / self.n_switches

    @property
    def g_b(self) -> float:
        """Per-switch conductance in state B."""
        return self.g_b_total / self.n_switches

    @property
    def thermal_voltage(self) -> float:
        """V_T = kT/q in volts."""
        return BOLTZMANN * self.temperature / ELEMENTARY_CHARGE

    @property
    def beta(self) -> float:
        """Logistic slope q/(kT) in 1/V."""
        return ELEMENTARY_CHARGE / (BOLTZMANN * self.temperature)

    @property
    def conductance_range(self) -> Tuple[float, float]:
        """(min, max) of the device conductance over all populations."""
        return min(self.g_a_total, self.g_b_total), max(self.g_a_total, self.g_b_total)

    def to_dict(self) -> Dict[str, Any]:
        """Flat dict with dotted names for the diode coefficients."""
        result = asdict(self)
        diode = result.pop("diode")
        for key, value in diode.items():
            result[f"diode.{key}"] = value
        return result

    def get_value(self, name: str) -> float:
        """Reads a (possibly dotted) parameter by name."""
        if name.startswith("diode."):
            return getattr(self.diode, name[len("diode.") :])
        return getattr(self, name)

    def with_named_values(self, values: Dict[str, Any]) -> "MssParams":
        """Returns a copy with the parameters from `values` (dotted names for the diode) replaced."""
        own: Dict[str, Any] = {}
        diode: Dict[str, Any] = {}
        for name, value in values.items():
            if name.startswith("diode."):
                diode[name[len("diode.") :]] = value
            else:
                own[name] = value
        if diode:
            own["diode"] = replace(self.diode, **diode)
        return replace(self, **own)


# Parameters that may be varied continuously (fit, sweep):
CONTINUOUS_PARAMETERS = (
    "t_c",
    "g_a_total",
    "g_b_total",
    "v_a",
    "v_b",
    "phi",
    "temperature",
    "diode.alpha_f",
    "diode.beta_f",
    "diode.alpha_r",
    "diode.beta_r",
)

ALL_PARAMETERS = ("n_switches",) + CONTINUOUS_PARAMETERS
