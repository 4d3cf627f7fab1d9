"""
Validation utilities for user-supplied parameters and paths
"""
import logging
from pathlib import Path
from typing import Iterable

from laurentnet.core.algebra import is_prime
from laurentnet.core.errors import ConfigError, InvalidModulus

logger = logging.getLogger(__name__)


def validate_prime(b: int, field_name: str = "b") -> int:
    """
    Validate that the field size is a prime

    Args:
        b: Candidate field size
        field_name: Name of the field for error messages

    Returns:
        The validated value

    Raises:
        InvalidModulus: If b is not a prime
    """
    if isinstance(b, bool) or not isinstance(b, int):
        raise InvalidModulus(f"{field_name} must be an integer, got {b!r}", {"b": str(b)})
    if not is_prime(b):
        logger.warning(f"Rejected non-prime {field_name}={b}")
        raise InvalidModulus(f"{field_name} must be a prime, got {b}", {"b": b})
    return b


def validate_positive(value: int, field_name: str, minimum: int = 1) -> int:
    if value < minimum:
        raise ConfigError(f"{field_name} must be at least {minimum}, got {value}")
    return value


def validate_format(fmt: str, allowed: Iterable[str]) -> str:
    """Check an output format name against the allowed list"""
    allowed = list(allowed)
    if fmt not in allowed:
        raise ConfigError(f"Format not allowed: {fmt}. Allowed formats: {', '.join(allowed)}")
    return fmt


def validate_output_path(path: str) -> str:
    """
    Validate an output path

    Returns:
        Resolved path

    Raises:
        ConfigError: If the path is empty or names a directory
    """
    if not path or not str(path).strip():
        raise ConfigError("Output path cannot be empty")

    target = Path(path).resolve()
    if target.exists() and target.is_dir():
        raise ConfigError(f"Output path {path} is a directory")
    return str(target)


def parse_range(text: str, field_name: str = "range") -> range:
    """Parse ``"1..5"`` (inclusive) or a single integer"""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"{field_name} must look like 'r1..r2', got {text!r}")
    if lo < 1 or hi < lo:
        raise ConfigError(f"{field_name} must satisfy 1 <= r1 <= r2, got {text!r}")
    return range(lo, hi + 1)
