"""Errors of the Fitting Module."""
from typing import Any, Dict
from enum import Enum, auto as enum_auto

# Methods are self-documenting here.
# pylint: disable=missing-docstring


class FitError(Exception):
    """Error raised if a fit problem is malformed or cannot be started.
    Every object of this class contains field `error_kind` which is a value of type ErrorKind
    and a dict `error_data` with details."""

    class ErrorKind(Enum):
        """
        Kind of the error. Possible variants:
          - INVALID_PROBLEM: Unknown free parameter, invalid bounds or an initial value outside its bounds.
          - INITIALIZATION: The objective is not finite at the initial point.
          - LENGTH_MISMATCH: Model and measured traces have different lengths or timestamps.
          - DEGENERATE_MEASUREMENT: The measured current is constant, so the normalized loss is undefined.
        """

        INVALID_PROBLEM = enum_auto()
        INITIALIZATION = enum_auto()
        LENGTH_MISMATCH = enum_auto()
        DEGENERATE_MEASUREMENT = enum_auto()

    def __init__(self, message: str, error_kind: "FitError.ErrorKind", error_data: Dict[str, Any]) -> None:
        super().__init__(message)

        self.error_kind = error_kind
        self.error_data = error_data

    @property
    def kind_name(self) -> str:
        return self.error_kind.name.lower()

    @classmethod
    def invalid_problem(cls, name: str, details: str) -> "FitError":
        error_msg = f"Invalid fit problem for parameter '{name}': {details}"
        return cls(error_msg, cls.ErrorKind.INVALID_PROBLEM, {"name": name})

    @classmethod
    def initialization(cls, value: Any, details: str = "") -> "FitError":
        error_msg = f"Objective is not finite at the initial point (value {value}). {details}".strip()
        return cls(error_msg, cls.ErrorKind.INITIALIZATION, {"value": value})

    @classmethod
    def length_mismatch(cls, model_length: int, measured_length: int) -> "FitError":
        error_msg = f"Model trace has {model_length} samples, measured trace has {measured_length}"
        error_data = {"model_length": model_length, "measured_length": measured_length}
        return cls(error_msg, cls.ErrorKind.LENGTH_MISMATCH, error_data)

    @classmethod
    def misaligned_timestamps(cls, index: int) -> "FitError":
        error_msg = f"Model and measured timestamps differ at sample {index}"
        return cls(error_msg, cls.ErrorKind.LENGTH_MISMATCH, {"index": index})

    @classmethod
    def degenerate_measurement(cls) -> "FitError":
        error_msg = "Measured current has zero standard deviation, normalized RMSE is undefined"
        return cls(error_msg, cls.ErrorKind.DEGENERATE_MEASUREMENT, {})
