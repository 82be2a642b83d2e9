"""
Lightweight in-memory solver metrics for observability and tuning.
"""

from threading import Lock
from typing import Dict, Optional

_CATEGORIES = ("nodes", "timeouts", "verifications", "retirements")

_metrics_lock = Lock()
_metrics: Dict[str, Dict[str, int]] = {category: {} for category in _CATEGORIES}


def _record(category: str, label: Optional[str], amount: int = 1) -> None:
    key = label or "unlabelled"
    bucket = _metrics.get(category)
    if bucket is None:
        return
    with _metrics_lock:
        bucket[key] = bucket.get(key, 0) + amount
        bucket["global"] = bucket.get("global", 0) + amount


def record_search_nodes(label: Optional[str], count: int) -> None:
    """Call once per finished search with the number of nodes it expanded."""
    if count > 0:
        _record("nodes", label, count)


def record_timeout(label: Optional[str]) -> None:
    _record("timeouts", label)


def record_verification(label: Optional[str]) -> None:
    _record("verifications", label)


def record_retirement(label: Optional[str]) -> None:
    """Call when a lower-level point is absorbed by a perturbed top-level point."""
    _record("retirements", label)


def get_solver_metrics() -> Dict[str, Dict[str, int]]:
    """Return a snapshot of current solver metrics."""
    with _metrics_lock:
        return {category: dict(bucket) for category, bucket in _metrics.items()}


def reset_solver_metrics() -> None:
    with _metrics_lock:
        for bucket in _metrics.values():
            bucket.clear()
