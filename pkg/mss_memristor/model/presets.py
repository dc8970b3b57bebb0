"""Named Device Parameter Sets.

The three presets reproduce the reference hysteresis regimes of a W-Ag-chalcogenide device driven by a
0.5 V, 500 Hz sine:
  - chalcogenide: N = 1000 switches, pure memory branch (pinched loop).
  - chalcogenide-sparse: the same device with N = 10 switches (visibly stochastic loop).
  - chalcogenide-diode: the same device with a Schottky branch blended in (phi = 0.45).
"""
from typing import Dict, List
from logging import getLogger

from ..errors import MssModelError
from .params import MssParams, DiodeParams

# pylint: disable=C0103
logger = getLogger(__name__)

CHALCOGENIDE = MssParams(
    n_switches=1000,
    t_c=1e-4,
    g_a_total=2.125e-3,
    g_b_total=0.67e-3,
    v_a=0.27,
    v_b=0.37,
    phi=1.0,
)

CHALCOGENIDE_SPARSE = CHALCOGENIDE.with_named_values({"n_switches": 10})

CHALCOGENIDE_DIODE = CHALCOGENIDE.with_named_values(
    {"phi": 0.45, "diode": DiodeParams(alpha_f=5e-5, beta_f=6.0, alpha_r=5e-5, beta_r=6.0)}
)

_PRESETS: Dict[str, MssParams] = {
    "chalcogenide": CHALCOGENIDE,
    "chalcogenide-sparse": CHALCOGENIDE_SPARSE,
    "chalcogenide-diode": CHALCOGENIDE_DIODE,
}


def preset_names() -> List[str]:
    """Names accepted by `get_preset`."""
    return list(_PRESETS)


def get_preset(name: str) -> MssParams:
    """Returns the parameter set registered under `name`."""
    try:
        return _PRESETS[name]
    except KeyError:
        err = MssModelError.invalid_parameter("preset", name, f"one of {preset_names()}")
        logger.warning(str(err))
        raise err
