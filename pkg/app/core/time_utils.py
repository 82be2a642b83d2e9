from __future__ import annotations

import time
from datetime import datetime, timezone
from typing import Optional

from .errors import SolverTimeoutError


def utc_now() -> datetime:
    """Return a naive UTC timestamp without using deprecated utcnow()."""
    return datetime.now(timezone.utc).replace(tzinfo=None)


class Deadline:
    """Monotonic time budget; `None` seconds means unlimited."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self._expires_at = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self._expires_at is not None and time.monotonic() >= self._expires_at

    def check(self) -> None:
        if self.expired():
            raise SolverTimeoutError(f"deadline of {self.seconds}s exceeded")
