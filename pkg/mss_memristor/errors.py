"""Common Errors for the Device Model, Stochastics and Drivers."""
from typing import Any, Dict
from enum import Enum, auto as enum_auto

# Methods are self-documenting here.
# pylint: disable=missing-docstring


class MssModelError(Exception):
    """
    Error raised by the device model, the samplers and the waveform drivers.
    Every object of this class contains field `error_kind` which is a value of type ErrorKind
    and a dict `error_data` with the offending values.
    """

    class ErrorKind(Enum):
        """
        Kind of the error. Possible variants:
          - DOMAIN: A value is outside of the mathematical domain of an operation (non-finite voltage,
            probability outside of [0, 1], negative population).
          - PARAMETER: A device, waveform or grid parameter violates its constraints.
          - STATE: A device state violates its invariants.
        """

        DOMAIN = enum_auto()
        PARAMETER = enum_auto()
        STATE = enum_auto()

    def __init__(self, message: str, error_kind: "MssModelError.ErrorKind", error_data: Dict[str, Any]) -> None:
        super().__init__(message)

        self.error_kind = error_kind
        self.error_data = error_data

    @property
    def kind_name(self) -> str:
        return self.error_kind.name.lower()

    @classmethod
    def non_finite(cls, name: str, value: Any) -> "MssModelError":
        error_msg = f"Domain error: '{name}' must be finite, got {value}"
        return cls(error_msg, cls.ErrorKind.DOMAIN, {"name": name, "value": value})

    @classmethod
    def out_of_domain(cls, name: str, value: Any, constraint: str) -> "MssModelError":
        error_msg = f"Domain error: '{name}' = {value} violates {constraint}"
        return cls(error_msg, cls.ErrorKind.DOMAIN, {"name": name, "value": value, "constraint": constraint})

    @classmethod
    def invalid_parameter(cls, name: str, value: Any, constraint: str) -> "MssModelError":
        error_msg = f"Parameter error: '{name}' = {value} violates {constraint}"
        return cls(error_msg, cls.ErrorKind.PARAMETER, {"name": name, "value": value, "constraint": constraint})

    @classmethod
    def invalid_time_step(cls, dt: float, t_c: float) -> "MssModelError":
        error_msg = f"Parameter error: time step dt = {dt} must satisfy 0 < dt <= t_c = {t_c}"
        return cls(error_msg, cls.ErrorKind.PARAMETER, {"name": "dt", "value": dt, "t_c": t_c})

    @classmethod
    def state_violation(cls, n_a: Any, n_b: Any, n_switches: int) -> "MssModelError":
        error_msg = f"State error: populations n_a = {n_a}, n_b = {n_b} do not partition N = {n_switches}"
        return cls(error_msg, cls.ErrorKind.STATE, {"n_a": n_a, "n_b": n_b, "n_switches": n_switches})
