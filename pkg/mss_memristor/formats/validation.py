"""Field Readers for Config Validation."""
from typing import Any, Dict, List, Optional, Sequence, Tuple
from logging import getLogger
import math

from .errors import ConfigError

# Those utils are internal and very simple, so they don't require docs.
# pylint: disable=missing-docstring
# pylint: disable=C0103
logger = getLogger(__name__)


def join_path(prefix: str, field: str) -> str:
    return f"{prefix}.{field}" if prefix else field


def is_dict(value: Any) -> bool:
    return isinstance(value, dict)


def is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def as_number(value: Any) -> Optional[float]:
    # YAML 1.1 reads exponents without a dot (1e-6) as strings.
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            return None
    return float(value) if is_number(value) else None


def is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class Issues:
    """Collects (path, message) pairs so every violation of a config is reported at once."""

    def __init__(self) -> None:
        self.items: List[Tuple[str, str]] = []

    def __len__(self) -> int:
        return len(self.items)

    def add(self, path: str, message: str) -> None:
        logger.debug("Config issue at %s: %s", path, message)
        self.items.append((path, message))

    def raise_if_any(self) -> None:
        if self.items:
            err = ConfigError(self.items)
            logger.warning(str(err))
            raise err


def check_keys(data: Dict[Any, Any], allowed: Sequence[str], prefix: str, issues: Issues) -> None:
    for key in data:
        if key not in allowed:
            issues.add(join_path(prefix, str(key)), f"unknown field, expected one of {', '.join(allowed)}")


def read_section(data: Dict[Any, Any], field: str, prefix: str, issues: Issues) -> Dict[Any, Any]:
    value = data.get(field, {})
    if value is None:
        return {}
    if not is_dict(value):
        issues.add(join_path(prefix, field), "expected a mapping")
        return {}
    return value


def read_number(
    data: Dict[Any, Any],
    field: str,
    prefix: str,
    issues: Issues,
    default: Optional[float] = None,
    positive: bool = False,
    non_negative: bool = False,
) -> Optional[float]:
    path = join_path(prefix, field)
    if field not in data:
        if default is None:
            issues.add(path, "missing required number")
        return default
    value = as_number(data[field])
    if value is None:
        issues.add(path, f"expected a finite number, got {data[field]!r}")
        return None
    if positive and value <= 0:
        issues.add(path, f"must be > 0, got {value!r}")
        return None
    if non_negative and value < 0:
        issues.add(path, f"must be >= 0, got {value!r}")
        return None
    return float(value)


def read_integer(
    data: Dict[Any, Any], field: str, prefix: str, issues: Issues, default: Optional[int] = None, minimum: int = 0
) -> Optional[int]:
    path = join_path(prefix, field)
    if field not in data:
        if default is None:
            issues.add(path, "missing required integer")
        return default
    value = data[field]
    if not is_integer(value):
        issues.add(path, f"expected an integer, got {value!r}")
        return None
    if value < minimum:
        issues.add(path, f"must be >= {minimum}, got {value!r}")
        return None
    return value


def read_string(
    data: Dict[Any, Any], field: str, prefix: str, issues: Issues, default: Optional[str] = None
) -> Optional[str]:
    path = join_path(prefix, field)
    if field not in data:
        if default is None:
            issues.add(path, "missing required string")
        return default
    value = data[field]
    if not isinstance(value, str) or not value:
        issues.add(path, f"expected a non-empty string, got {value!r}")
        return None
    return value


def read_choice(
    data: Dict[Any, Any], field: str, prefix: str, issues: Issues, choices: Sequence[str], default: str
) -> Optional[str]:
    value = read_string(data, field, prefix, issues, default)
    if value is not None and value not in choices:
        issues.add(join_path(prefix, field), f"expected one of {', '.join(choices)}, got {value!r}")
        return None
    return value
