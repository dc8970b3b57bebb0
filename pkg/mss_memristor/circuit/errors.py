"""Errors of the Series Circuit Solver."""
from typing import Any, Dict
from enum import Enum, auto as enum_auto

# Methods are self-documenting here.
# pylint: disable=missing-docstring


class SolverError(Exception):
    """Error raised if a series circuit cannot be solved.
    Every object of this class contains field `error_kind` which is a value of type ErrorKind
    and a dict `error_data` with diagnostics."""

    class ErrorKind(Enum):
        """
        Kind of the error. Possible variants:
          - NON_MONOTONE: An element I(V) is not strictly increasing, so it cannot be inverted.
          - BRACKET_FAILURE: No current or voltage bracket containing the solution was found.
          - EMPTY_CIRCUIT: The circuit has no elements.
        """

        NON_MONOTONE = enum_auto()
        BRACKET_FAILURE = enum_auto()
        EMPTY_CIRCUIT = enum_auto()

    def __init__(self, message: str, error_kind: "SolverError.ErrorKind", error_data: Dict[str, Any]) -> None:
        super().__init__(message)

        self.error_kind = error_kind
        self.error_data = error_data

    @property
    def kind_name(self) -> str:
        return self.error_kind.name.lower()

    @classmethod
    def non_monotone(cls, index: int, element: Any) -> "SolverError":
        error_msg = f"Element {index} ({element}) has a non-increasing I(V) and cannot be solved in series"
        return cls(error_msg, cls.ErrorKind.NON_MONOTONE, {"index": index, "element": element})

    @classmethod
    def bracket_failure(cls, target: str, value: float, low: float, high: float) -> "SolverError":
        error_msg = f"Bracket failure while solving for {target} = {value}: last bracket [{low}, {high}]"
        error_data = {"target": target, "value": value, "low": low, "high": high}
        return cls(error_msg, cls.ErrorKind.BRACKET_FAILURE, error_data)

    @classmethod
    def empty_circuit(cls) -> "SolverError":
        return cls("Series circuit has no elements", cls.ErrorKind.EMPTY_CIRCUIT, {})
