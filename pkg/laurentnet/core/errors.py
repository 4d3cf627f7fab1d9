"""
Exception hierarchy shared by the library and the CLI.

Every error carries a machine-readable ``code`` and a distinct process ``exit_code``.
"""
from typing import Any, Dict, List, Optional, Tuple


class LaurentNetError(Exception):
    """Base class for all domain errors"""

    code = "internal_error"
    exit_code = 1
    summary = "unexpected internal error"

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message or self.summary)
        self.message = message or self.summary
        self.details = dict(details or {})


class ConfigError(LaurentNetError):
    """Raised when configuration or user input is invalid"""

    code = "config_invalid"
    exit_code = 2
    summary = "invalid configuration or arguments"


class InvalidModulus(ConfigError):
    code = "invalid_modulus"
    exit_code = 3
    summary = "field size b is not a prime"


class ModulusMismatch(LaurentNetError):
    code = "modulus_mismatch"
    exit_code = 4
    summary = "operands live over different prime fields"


class PrecisionExhausted(LaurentNetError):
    """A result needs coefficients beyond the tracked precision"""

    code = "precision_exhausted"
    exit_code = 5
    summary = "tracked precision is insufficient; raise the working precision"


class DivideByZero(LaurentNetError):
    code = "divide_by_zero"
    exit_code = 6
    summary = "division by a series that is zero up to precision"


class NonConvergent(LaurentNetError):
    code = "non_convergent"
    exit_code = 7
    summary = "Frobenius sum of a series with non-negative degree diverges"


class Singular(LaurentNetError):
    code = "singular"
    exit_code = 8
    summary = "matrix has no nonzero pivot within precision (higher precision may resolve it)"


class DimensionMismatch(LaurentNetError):
    code = "dimension_mismatch"
    exit_code = 9
    summary = "operand dimensions are not conformable"


class BudgetExceeded(LaurentNetError):
    code = "budget_exceeded"
    exit_code = 10
    summary = "enumeration exceeds the configured budget"


class PreconditionViolated(LaurentNetError):
    code = "precondition_violated"
    exit_code = 11
    summary = "operation precondition does not hold"


class ShrinkConditionViolated(LaurentNetError):
    code = "shrink_condition_violated"
    exit_code = 12
    summary = "shrinking factor degrees are below the minimal admissible degrees"


class DuplicateAtDepth(LaurentNetError):
    code = "duplicate_at_depth"
    exit_code = 13
    summary = "points coincide at the requested digit depth; raise the depth"


class NotAGroup(LaurentNetError):
    code = "not_a_group"
    exit_code = 14
    summary = "point set is not closed under digit-wise addition"


class DimensionTooLarge(LaurentNetError):
    code = "dimension_too_large"
    exit_code = 15
    summary = "exact computation is limited to small dimension and size"


class InconsistentReport(LaurentNetError):
    code = "inconsistent_report"
    exit_code = 16
    summary = "independent verification paths disagree"


class ParseError(LaurentNetError):
    code = "parse_error"
    exit_code = 17
    summary = "input text could not be parsed"


IO_EXIT_CODE = 18
USAGE_EXIT_CODE = 64


def exit_code_table() -> List[Tuple[int, str, str]]:
    """(exit code, error code, summary) for every error class, sorted by exit code."""
    seen = {}
    stack = [LaurentNetError]
    while stack:
        cls = stack.pop()
        seen[cls.exit_code] = (cls.exit_code, cls.code, cls.summary)
        stack.extend(cls.__subclasses__())
    seen[IO_EXIT_CODE] = (IO_EXIT_CODE, "io_error", "file could not be read or written")
    seen[USAGE_EXIT_CODE] = (USAGE_EXIT_CODE, "usage", "command-line usage error")
    return [seen[k] for k in sorted(seen)]
