"""
Exact minimum string attractors by branch and bound over hitting-set constraints.

Constraints are covered-position bitmasks (Python ints, bit p = position p).
The decision search branches on the constraint with the fewest usable
positions and tries them in increasing order; positions already tried at a
level are banned for the later siblings so every solution is explored once.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

from ..models.base import AttractorSet, GammaSolution, LowerBounds, SpanExtremes, Word
from .attractor import constraint_masks, delta, is_attractor
from .config import settings
from .errors import EmptyWordError, SolverTimeoutError, VerificationError
from .greedy import greedy_for_word
from .solver_metrics import record_search_nodes, record_timeout
from .time_utils import Deadline

logger = logging.getLogger(__name__)

_CHECK_EVERY = 256


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _above(p: int) -> int:
    """Mask of all positions > p."""
    return ~((1 << (p + 1)) - 1)


def packing_bound(masks: Sequence[int]) -> int:
    """Number of pairwise-disjoint constraints picked greedily, smallest first."""
    used = 0
    count = 0
    for mask in sorted(masks, key=int.bit_count):
        if not mask & used:
            used |= mask
            count += 1
    return count


class _Search:
    def __init__(self, deadline: Deadline):
        self.deadline = deadline
        self.nodes = 0

    def find(self, pending: List[int], budget: int, banned: int = 0) -> Optional[int]:
        """A mask of at most `budget` positions hitting every pending constraint, or None."""
        self.nodes += 1
        if self.nodes % _CHECK_EVERY == 0:
            self.deadline.check()
        if not pending:
            return 0
        if budget <= 0:
            return None

        allowed = ~banned
        effective = []
        for mask in pending:
            usable = mask & allowed
            if not usable:
                return None
            effective.append(usable)
        effective.sort(key=int.bit_count)

        used = 0
        packed = 0
        for usable in effective:
            if not usable & used:
                used |= usable
                packed += 1
                if packed > budget:
                    return None

        options = effective[0]
        while options:
            low = options & -options
            rest = [mask for mask in pending if not mask & low]
            found = self.find(rest, budget - 1, banned)
            if found is not None:
                return found | low
            banned |= low
            options ^= low
        return None

    def restrict_after(self, pending: Sequence[int], p: int) -> Optional[List[int]]:
        """Constraints not hit by p, limited to positions > p; None if one becomes empty."""
        bit = 1 << p
        above = _above(p)
        rest = []
        for mask in pending:
            if mask & bit:
                continue
            remaining = mask & above
            if not remaining:
                return None
            rest.append(remaining)
        return rest

    def lex_first(self, masks: Sequence[int], size: int) -> List[int]:
        """Lexicographically first hitting set of the given (feasible) size."""
        chosen: List[int] = []
        pending = list(masks)
        last = -1
        for slot in range(size):
            if not pending:
                break
            latest = min(mask.bit_length() - 1 for mask in pending)
            for p in range(last + 1, latest + 1):
                rest = self.restrict_after(pending, p)
                if rest is None:
                    continue
                if self.find(rest, size - slot - 1) is not None:
                    chosen.append(p)
                    pending = rest
                    last = p
                    break
            else:
                raise VerificationError(f"no hitting set of size {size} extends {chosen}")
        return chosen


def lower_bound(w: Word, masks: Optional[Sequence[int]] = None) -> LowerBounds:
    if len(w) == 0:
        raise EmptyWordError("gamma of the empty word is undefined")
    if masks is None:
        masks = [mask for mask, _, _ in constraint_masks(w)]
    d = delta(w)
    return LowerBounds(
        delta_num=d.numerator,
        delta_den=d.denominator,
        distinct_symbols=w.distinct_symbols(),
        packing=packing_bound(masks),
    )


def solve_gamma(w: Word, timeout_seconds: Optional[float] = None, label: Optional[str] = None) -> GammaSolution:
    """
    Exact gamma with the lexicographically first witness.

    On timeout the greedy attractor is returned with proven=False.
    """
    if len(w) == 0:
        raise EmptyWordError("gamma of the empty word is undefined")
    n = len(w)
    budget = settings.SOLVER_TIMEOUT_SECONDS if timeout_seconds is None else timeout_seconds
    search = _Search(Deadline(budget))

    masks = [mask for mask, _, _ in constraint_masks(w)]
    bounds = lower_bound(w, masks)
    greedy_positions = greedy_for_word(w).positions
    upper = len(greedy_positions)
    low = min(bounds.value, upper)

    try:
        size = upper
        for k in range(low, upper):
            if search.find(masks, k) is not None:
                size = k
                break
        witness = search.lex_first(masks, size)
        proven = True
    except SolverTimeoutError:
        record_timeout(label)
        logger.warning("[solver] n=%s timed out after %ss; reporting greedy size %s", n, budget, upper)
        size = upper
        witness = list(greedy_positions)
        proven = False
    finally:
        record_search_nodes(label, search.nodes)

    result = AttractorSet.of(witness, n)
    verdict = is_attractor(w, result, label=label)
    if not verdict.ok:
        raise VerificationError(
            f"solver witness {result} fails at n={n}",
            failing=(verdict.failing.start, verdict.failing.length),
        )
    logger.debug("[solver] n=%s gamma=%s lower=%s upper=%s nodes=%s", n, size, low, upper, search.nodes)
    return GammaSolution(
        size=size,
        witness=result,
        proven=proven,
        lower_bound=low,
        upper_bound=upper,
        nodes=search.nodes,
    )


def gamma(w: Word, timeout_seconds: Optional[float] = None) -> Tuple[int, AttractorSet]:
    solution = solve_gamma(w, timeout_seconds=timeout_seconds)
    return solution.size, solution.witness


def span_extremes(w: Word, timeout_seconds: Optional[float] = None, label: Optional[str] = None) -> SpanExtremes:
    """minspan and maxspan over all attractors of cardinality gamma(w), with witnesses."""
    solution = solve_gamma(w, timeout_seconds=timeout_seconds, label=label)
    k = solution.size
    if not solution.proven:
        return SpanExtremes(gamma=k, proven=False)
    n = len(w)
    masks = [mask for mask, _, _ in constraint_masks(w)]

    if k == 1:
        common = -1
        for mask in masks:
            common &= mask
        p = _bits(common)[0]
        single = AttractorSet(positions=(p,), n=n)
        return SpanExtremes(gamma=1, minspan=0, maxspan=0, minspan_witness=single, maxspan_witness=single)

    budget = settings.SOLVER_TIMEOUT_SECONDS if timeout_seconds is None else timeout_seconds
    search = _Search(Deadline(budget))
    best_max: Optional[Tuple[int, List[int]]] = None
    best_min: Optional[Tuple[int, List[int]]] = None

    def feasible(pending_a: List[int], a: int, b: int) -> Optional[List[int]]:
        if k == 2:
            return [a, b] if all(mask >> b & 1 for mask in pending_a) else None
        inner = _above(a) & ((1 << b) - 1)
        bit_b = 1 << b
        rest = []
        for mask in pending_a:
            if mask & bit_b:
                continue
            remaining = mask & inner
            if not remaining:
                return None
            rest.append(remaining)
        middle = search.find(rest, k - 2)
        if middle is None:
            return None
        return [a] + _bits(middle) + [b]

    try:
        latest_first = min(mask.bit_length() - 1 for mask in masks)
        for a in range(0, latest_first + 1):
            pending_a = search.restrict_after(masks, a)
            if pending_a is None or not pending_a:
                continue
            lowest_b = max((mask & -mask).bit_length() - 1 for mask in pending_a)

            if best_max is None or n - 1 - a > best_max[0]:
                for b in range(n - 1, lowest_b - 1, -1):
                    if best_max is not None and b - a <= best_max[0]:
                        break
                    found = feasible(pending_a, a, b)
                    if found is not None:
                        best_max = (b - a, found)
                        break

            for b in range(lowest_b, n):
                if best_min is not None and b - a >= best_min[0]:
                    break
                found = feasible(pending_a, a, b)
                if found is not None:
                    best_min = (b - a, found)
                    break
    except SolverTimeoutError:
        record_timeout(label)
        logger.warning("[solver] span search for n=%s timed out", n)
        return SpanExtremes(gamma=k, proven=False)
    finally:
        record_search_nodes(label, search.nodes)

    if best_min is None or best_max is None:
        raise VerificationError(f"no attractor of size {k} found during span search at n={n}")
    min_witness = AttractorSet.of(best_min[1], n)
    max_witness = AttractorSet.of(best_max[1], n)
    for witness in (min_witness, max_witness):
        verdict = is_attractor(w, witness, label=label)
        if not verdict.ok or len(witness) != k:
            raise VerificationError(f"span witness {witness} is not a minimum attractor at n={n}")
    return SpanExtremes(
        gamma=k,
        minspan=best_min[0],
        maxspan=best_max[0],
        minspan_witness=min_witness,
        maxspan_witness=max_witness,
    )
