"""
Exception hierarchy shared by the attractor toolkit.

Everything a caller can fix by changing its input derives from AttractorError,
which is a ValueError so plain `except ValueError` call sites keep working.
"""

from __future__ import annotations

from typing import Optional, Tuple


class AttractorError(ValueError):
    """Base class for invalid inputs to any attractor operation."""


class EmptyWordError(AttractorError):
    """Raised when an operation needs at least one symbol."""


class PositionOutOfRangeError(AttractorError):
    def __init__(self, position: int, n: int):
        super().__init__(f"position {position} outside [0..{n - 1}]")
        self.position = position
        self.n = n


class LengthOutOfRangeError(AttractorError):
    def __init__(self, length: int, low: int, high: int):
        super().__init__(f"length {length} outside [{low}..{high}]")
        self.length = length
        self.low = low
        self.high = high


class SequenceSpecError(AttractorError):
    """Unknown builtin name, malformed morphism/DFAO text or a non-prolongable morphism."""


class PrefixTooLongError(AttractorError):
    def __init__(self, requested: int, limit: int):
        super().__init__(f"prefix length {requested} exceeds MAX_PREFIX_LENGTH={limit}")
        self.requested = requested
        self.limit = limit


class DigitOutOfRangeError(AttractorError):
    def __init__(self, digit: int, base: int):
        super().__init__(f"digit {digit} outside base {base}")
        self.digit = digit
        self.base = base


class WindowTooSmallError(AttractorError):
    """A window-based estimate was asked for a length the window cannot support."""


class FamilyNotApplicableError(AttractorError):
    """Closed-form family called below its documented minimum n."""


class VerificationError(AttractorError):
    """A constructed set failed verification; carries the failing factor."""

    def __init__(self, message: str, failing: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.failing = failing


class SolverTimeoutError(RuntimeError):
    """Raised inside a search when its deadline passes; never escapes gamma()."""
