"""Errors of the Config and File Format Module."""
from typing import List, Optional, Tuple
from enum import Enum, auto as enum_auto

# Methods are self-documenting here.
# pylint: disable=missing-docstring


class TraceFormatError(Exception):
    """
    Error raised when a trace or measurement file cannot be parsed or fails validation.
    `line` holds the 1-based line number for parse errors.
    """

    class ErrorKind(Enum):
        """
        Kind of the error. Possible variants:
          - PARSE_ERROR: A row or header could not be parsed.
          - VALIDATION: The parsed data violates the trace invariants (too few samples, non-monotone time).
        """

        PARSE_ERROR = enum_auto()
        VALIDATION = enum_auto()

    def __init__(self, message: str, error_kind: "TraceFormatError.ErrorKind", line: Optional[int] = None) -> None:
        super().__init__(message)

        self.error_kind = error_kind
        self.line = line

    @property
    def kind_name(self) -> str:
        return self.error_kind.name.lower()

    @classmethod
    def parse_error(cls, line: int, details: str) -> "TraceFormatError":
        error_msg = f"Parse error at line {line}: {details}"
        return cls(error_msg, cls.ErrorKind.PARSE_ERROR, line)

    @classmethod
    def validation(cls, details: str) -> "TraceFormatError":
        error_msg = f"Validation error: {details}"
        return cls(error_msg, cls.ErrorKind.VALIDATION)


class ConfigError(Exception):
    """
    Error raised when a simulation config is invalid.
    Holds every violation found as a list of (path, message) pairs, e.g. ("grid.dt", "dt exceeds t_c").
    """

    def __init__(self, issues: List[Tuple[str, str]]) -> None:
        lines = [f"{path}: {message}" for path, message in issues]
        super().__init__("Invalid config: " + "; ".join(lines))

        self.issues = issues

    @property
    def paths(self) -> List[str]:
        return [path for path, _ in self.issues]

    @classmethod
    def single(cls, path: str, message: str) -> "ConfigError":
        return cls([(path, message)])
