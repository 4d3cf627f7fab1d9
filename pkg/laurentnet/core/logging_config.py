"""
Structured logging: one JSON object per line on stderr.
"""
import json
import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator

logger = logging.getLogger(__name__)


class JsonLineFormatter(logging.Formatter):
    """Render records as single-line JSON, merging ``extra={"fields": {...}}``"""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        fields = getattr(record, "fields", None)
        if isinstance(fields, dict):
            payload.update(fields)
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str, sort_keys=True)


def configure_logging(level: str = "INFO", json_lines: bool = True) -> None:
    """Install a single stderr handler on the root logger"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    if json_lines:
        handler.setFormatter(JsonLineFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)


@contextmanager
def log_stage(log: logging.Logger, stage: str, **fields: Any) -> Iterator[Dict[str, Any]]:
    """
    Log the start and end of a pipeline stage with its duration.

    The yielded dict may be filled with audit fields (precision reached, counts) that are
    attached to the completion record.
    """
    audit: Dict[str, Any] = {}
    log.info(f"{stage} started", extra={"fields": {"stage": stage, **fields}})
    started = time.perf_counter()
    try:
        yield audit
    except Exception:
        log.warning(
            f"{stage} failed",
            extra={"fields": {"stage": stage, "duration_s": round(time.perf_counter() - started, 6)}},
        )
        raise
    log.info(
        f"{stage} finished",
        extra={
            "fields": {
                "stage": stage,
                "duration_s": round(time.perf_counter() - started, 6),
                **fields,
                **audit,
            }
        },
    )
