from __future__ import annotations

import logging
import sys
import threading
import traceback
from collections import deque
from datetime import datetime, timezone
from typing import Deque, Dict, List, Optional

from .config import settings

_BUFFER_MAX = 500
_buffer: Deque[Dict[str, object]] = deque(maxlen=_BUFFER_MAX)
_lock = threading.Lock()
_next_id = 1
_handler: Optional[_StderrLineHandler] = None


class _StderrLineHandler(logging.Handler):
    """Writes `<ts> <LEVEL> <logger>: <message>` lines to stderr and keeps the last few."""

    def emit(self, record: logging.LogRecord) -> None:
        global _next_id
        try:
            message = record.getMessage()
            if record.exc_info:
                message = f"{message}\n{''.join(traceback.format_exception(*record.exc_info))}".rstrip()
            elif record.exc_text:
                message = f"{message}\n{record.exc_text}".rstrip()

            ts = datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat()
            line = f"{ts} {record.levelname} {record.name}: {message}"

            with _lock:
                _buffer.append(
                    {
                        "id": _next_id,
                        "level": record.levelname,
                        "logger": record.name,
                        "message": message,
                    }
                )
                _next_id += 1
            # Resolved per record so redirected streams (click's test runner) are honoured.
            sys.stderr.write(line + "\n")
        except Exception:
            return


def install_logging(level: Optional[str] = None) -> None:
    """Attach the stderr handler to the `app` logger tree; safe to call repeatedly."""
    global _handler
    app_logger = logging.getLogger("app")
    if _handler is None:
        _handler = _StderrLineHandler()
        app_logger.addHandler(_handler)
        app_logger.propagate = False
    app_logger.setLevel((level or settings.LOG_LEVEL).upper())


def get_log_entries(limit: int = 0) -> List[Dict[str, object]]:
    with _lock:
        items = list(_buffer)
    if limit and len(items) > limit:
        items = items[-limit:]
    return items


def clear_log_entries() -> None:
    global _next_id
    with _lock:
        _buffer.clear()
        _next_id = 1
