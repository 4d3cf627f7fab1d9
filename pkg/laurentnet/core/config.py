# laurentnet/core/config.py
import os
import logging
from typing import Any, Dict, Optional
from dotenv import load_dotenv

from laurentnet.core.errors import ConfigError

load_dotenv()

logger = logging.getLogger(__name__)


def validate_positive_int(
    value: Optional[str], name: str, default: int, minimum: int = 1
) -> int:
    """Parse an integer setting, falling back to a default when unset"""
    if value is None or value.strip() == "":
        return default

    try:
        parsed = int(value)
    except ValueError:
        raise ConfigError(f"{name} must be a valid integer, got {value!r}")

    if parsed < minimum:
        raise ConfigError(f"{name} must be at least {minimum}, got {parsed}")

    return parsed


def validate_log_level(level: Optional[str]) -> str:
    """Validate the log level name"""
    if not level:
        return "INFO"

    level = level.upper()
    allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
    if level not in allowed:
        raise ConfigError(f"Unsupported log level: {level}")

    return level


def validate_threads(value: Optional[str]) -> int:
    """Worker thread count; defaults to min(4, cpu count)"""
    default = min(4, os.cpu_count() or 1)
    threads = validate_positive_int(value, "LAURENTNET_THREADS", default)
    if threads > 64:
        logger.warning("LAURENTNET_THREADS=%d is very high for CPU-bound work", threads)
    return threads


try:
    PRECISION_FACTOR = validate_positive_int(
        os.getenv("LAURENTNET_PRECISION_FACTOR"), "LAURENTNET_PRECISION_FACTOR", 4
    )
    MIN_PRECISION = validate_positive_int(
        os.getenv("LAURENTNET_MIN_PRECISION"), "LAURENTNET_MIN_PRECISION", 32
    )
    GUARD_DIGITS = validate_positive_int(
        os.getenv("LAURENTNET_GUARD_DIGITS"), "LAURENTNET_GUARD_DIGITS", 8, minimum=0
    )
    SCAN_BUDGET = validate_positive_int(
        os.getenv("LAURENTNET_SCAN_BUDGET"), "LAURENTNET_SCAN_BUDGET", 2**16
    )
    MAX_POINTS = validate_positive_int(
        os.getenv("LAURENTNET_MAX_POINTS"), "LAURENTNET_MAX_POINTS", 2**20
    )
    DUAL_ENUM_CAP = validate_positive_int(
        os.getenv("LAURENTNET_DUAL_ENUM_CAP"), "LAURENTNET_DUAL_ENUM_CAP", 2**16
    )
    DISCREPANCY_MAX_POINTS = validate_positive_int(
        os.getenv("LAURENTNET_DISCREPANCY_MAX_POINTS"), "LAURENTNET_DISCREPANCY_MAX_POINTS", 4096
    )
    DISCREPANCY_MAX_GRID = validate_positive_int(
        os.getenv("LAURENTNET_DISCREPANCY_MAX_GRID"), "LAURENTNET_DISCREPANCY_MAX_GRID", 2**26
    )
    THREADS = validate_threads(os.getenv("LAURENTNET_THREADS"))
    LOG_LEVEL = validate_log_level(os.getenv("LAURENTNET_LOG_LEVEL"))
    OUTPUT_DIR = os.getenv("LAURENTNET_OUTPUT_DIR", "output")

    logger.debug("Configuration validated successfully")

except ConfigError as e:
    logger.error(f"Configuration error: {e}")
    raise
except Exception as e:
    logger.error(f"Unexpected configuration error: {e}")
    raise ConfigError(f"Configuration validation failed: {e}")


def working_precision(m: int, d: int, depth: Optional[int] = None) -> int:
    """Default absolute precision for a net with b^m points in dimension d."""
    prec = max(PRECISION_FACTOR * (m + d), MIN_PRECISION)
    if depth is not None:
        prec = max(prec, 2 * depth + 2 * d)
    return prec


def default_depth(m: int) -> int:
    return m + GUARD_DIGITS


def precision_policy() -> Dict[str, Any]:
    """Arithmetic defaults embedded in --version output and report metadata"""
    return {
        "precision": f"max({PRECISION_FACTOR}*(m+d), 2*depth+2*d, {MIN_PRECISION})",
        "depth": f"m+{GUARD_DIGITS}",
        "duplicate_retry": "one retry at doubled depth",
        "scan_budget": SCAN_BUDGET,
        "max_points": MAX_POINTS,
        "dual_enum_cap": DUAL_ENUM_CAP,
        "discrepancy_max_points": DISCREPANCY_MAX_POINTS,
    }
