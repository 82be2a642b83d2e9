"""Per-n gamma records for a sequence, optionally spread over worker processes."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Tuple

from app.core.attractor import delta
from app.core.config import settings
from app.core.errors import LengthOutOfRangeError
from app.core.greedy import greedy_run
from app.core.sequences import prefix
from app.core.solver import solve_gamma, span_extremes
from app.models.base import GammaRecord, SequenceSpec

logger = logging.getLogger(__name__)

FIELDS = ("spans", "delta", "greedy")


def gamma_record(
    spec: SequenceSpec, n: int, fields: Iterable[str] = (), timeout_seconds: Optional[float] = None
) -> GammaRecord:
    """Exact gamma of w[0..n-1] plus the optional columns named in `fields`."""
    wanted = set(fields)
    w = prefix(spec, n)
    label = f"sweep:{spec.name}"
    solution = solve_gamma(w, timeout_seconds=timeout_seconds, label=label)
    record = {
        "n": n,
        "gamma": solution.size,
        "proven": solution.proven,
        "witness": solution.witness.positions,
    }
    if "spans" in wanted and solution.proven:
        spans = span_extremes(w, timeout_seconds=timeout_seconds, label=label)
        if spans.proven:
            record.update(
                minspan=spans.minspan,
                maxspan=spans.maxspan,
                minspan_witness=spans.minspan_witness.positions,
                maxspan_witness=spans.maxspan_witness.positions,
            )
    if "delta" in wanted:
        d = delta(w)
        record.update(delta_num=d.numerator, delta_den=d.denominator)
    if "greedy" in wanted:
        record["greedy_size"] = len(greedy_run(spec, n).positions)
    return GammaRecord(**record)


def _worker(job: Tuple[SequenceSpec, int, Tuple[str, ...], Optional[float]]) -> GammaRecord:
    spec, n, fields, timeout_seconds = job
    return gamma_record(spec, n, fields, timeout_seconds)


def gamma_table(
    spec: SequenceSpec,
    n_max: int,
    fields: Iterable[str] = (),
    threads: Optional[int] = None,
    timeout_seconds: Optional[float] = None,
    n_min: int = 1,
) -> List[GammaRecord]:
    """Records for n_min..n_max in ascending n, whatever order the workers finish in."""
    if n_min < 1:
        raise LengthOutOfRangeError(n_min, 1, n_max)
    if n_max < n_min:
        return []
    wanted = tuple(field for field in FIELDS if field in set(fields))
    workers = settings.SOLVER_THREADS if threads is None else max(1, threads)
    jobs = [(spec, n, wanted, timeout_seconds) for n in range(n_min, n_max + 1)]

    logger.info("[sweep] %s n=%s..%s fields=%s workers=%s", spec.name, n_min, n_max, wanted, workers)
    if workers == 1 or len(jobs) == 1:
        records = [_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_worker, jobs))

    records.sort(key=lambda record: record.n)
    unproven = [record.n for record in records if not record.proven]
    if unproven:
        logger.warning("[sweep] %s: %s rows timed out: %s", spec.name, len(unproven), unproven)
    logger.info("[sweep] %s finished %s rows", spec.name, len(records))
    return records
