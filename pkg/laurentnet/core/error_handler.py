"""
CLI error handler: maps exceptions to exit codes and JSON error payloads
"""
import logging
import traceback
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Tuple

from laurentnet.core.errors import IO_EXIT_CODE, LaurentNetError
from laurentnet.schemas.report import ErrorPayload

logger = logging.getLogger(__name__)


class CliErrorHandler:
    """Turn exceptions raised by a stage into (exit code, payload)"""

    def __init__(self, debug: bool = False):
        self.logger = logging.getLogger(__name__)
        self.debug = debug

    def handle_exception(self, exc: BaseException, stage: Optional[str] = None) -> Tuple[int, Dict[str, Any]]:
        """
        Handle an exception raised while running ``stage``

        Args:
            exc: Exception that occurred
            stage: Pipeline stage or subcommand name

        Returns:
            (process exit code, JSON-serialisable payload)
        """
        timestamp = self._get_timestamp()

        if isinstance(exc, LaurentNetError):
            # Domain errors are expected outcomes; no stack trace
            self.logger.warning(
                f"{stage or 'run'} failed: {exc.code}: {exc.message}",
                extra={"fields": {"stage": stage, "code": exc.code, **_plain(exc.details)}},
            )
            payload = ErrorPayload(
                code=exc.code,
                message=exc.message,
                stage=stage,
                timestamp=timestamp,
                details=_plain(exc.details),
            )
            return exc.exit_code, payload.model_dump(exclude_none=True)

        if isinstance(exc, OSError):
            self.logger.warning(f"{stage or 'run'} failed: I/O error: {exc}")
            payload = ErrorPayload(code="io_error", message=str(exc), stage=stage, timestamp=timestamp)
            return IO_EXIT_CODE, payload.model_dump(exclude_none=True)

        # Unexpected exceptions
        error_id = self._generate_error_id()
        self.logger.error(
            f"Unexpected error [{error_id}] in {stage or 'run'} | Type: {type(exc).__name__} | Error: {exc}"
        )
        if self.debug:
            self.logger.error(f"Stack trace [{error_id}]: {traceback.format_exc()}")

        payload = ErrorPayload(
            code="internal_error",
            message="An unexpected error occurred",
            stage=stage,
            timestamp=timestamp,
            error_id=error_id,
        )
        if self.debug:
            payload.debug = {
                "exception_type": type(exc).__name__,
                "error_message": str(exc),
                "stack_trace": traceback.format_exc().split("\n")[-10:],
            }
        return 1, payload.model_dump(exclude_none=True)

    def _generate_error_id(self) -> str:
        """Short id to correlate the payload with the log"""
        return str(uuid.uuid4())[:8]

    def _get_timestamp(self) -> str:
        return datetime.now(timezone.utc).isoformat()


def _plain(details: Dict[str, Any]) -> Dict[str, Any]:
    """Details with non-JSON values stringified"""
    out = {}
    for key, value in details.items():
        if isinstance(value, (str, int, bool)) or value is None:
            out[key] = value
        elif isinstance(value, float):
            out[key] = value if value == value and abs(value) != float("inf") else str(value)
        elif isinstance(value, (list, tuple)):
            out[key] = [v if isinstance(v, (str, int, bool)) else str(v) for v in value]
        else:
            out[key] = str(value)
    return out
