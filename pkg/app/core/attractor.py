"""
String attractor verification, factor complexity and hitting-set constraints.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple, Union

from ..models.base import AttractorSet, AttractorVerdict, FactorConstraint, FactorOccurrence, LengthRange, Word
from .errors import EmptyWordError, LengthOutOfRangeError, PositionOutOfRangeError
from .solver_metrics import record_verification
from .suffix_index import SuffixIndex

logger = logging.getLogger(__name__)

Positions = Union[AttractorSet, Iterable[int]]


@lru_cache(maxsize=32)
def _cached_index(symbols: Tuple[int, ...]) -> SuffixIndex:
    return SuffixIndex(symbols)


def build_index(w: Word) -> SuffixIndex:
    if len(w) == 0:
        raise EmptyWordError("the empty word has no factors")
    return _cached_index(w.symbols)


def _checked_positions(w: Word, S: Positions) -> List[int]:
    positions = S.positions if isinstance(S, AttractorSet) else tuple(S)
    n = len(w)
    for p in positions:
        if p < 0 or p >= n:
            raise PositionOutOfRangeError(p, n)
    return sorted(set(positions))


def _verdict(failing: Optional[Tuple[int, int]]) -> AttractorVerdict:
    if failing is None:
        return AttractorVerdict(ok=True)
    start, length = failing
    return AttractorVerdict(ok=False, failing=FactorOccurrence(start=start, length=length))


def is_attractor(w: Word, S: Positions, label: Optional[str] = None) -> AttractorVerdict:
    """Every distinct nonempty factor has an occurrence touching S."""
    positions = _checked_positions(w, S)
    record_verification(label)
    if len(w) == 0:
        return AttractorVerdict(ok=True)
    verdict = _verdict(build_index(w).first_uncovered(positions))
    if not verdict.ok:
        logger.debug(
            "[verify] n=%s set=%s misses factor at %s length %s",
            len(w),
            positions,
            verdict.failing.start,
            verdict.failing.length,
        )
    return verdict


def is_attractor_for_lengths(
    w: Word, S: Positions, L: LengthRange, label: Optional[str] = None
) -> AttractorVerdict:
    """Attractor property restricted to factors whose length lies in L."""
    positions = _checked_positions(w, S)
    record_verification(label)
    L = L.clip(len(w))
    if len(w) == 0 or L.is_empty():
        return AttractorVerdict(ok=True)
    return _verdict(build_index(w).first_uncovered(positions, L))


def factor_counts(w: Word) -> Tuple[int, ...]:
    """rho_l for l = 1..|w|; entry l-1 holds rho_l."""
    counts = build_index(w).distinct_counts()
    return tuple(int(c) for c in counts[1:])


def factor_count(w: Word, length: int) -> int:
    if length < 1 or length > len(w):
        raise LengthOutOfRangeError(length, 1, len(w))
    return factor_counts(w)[length - 1]


def delta(w: Word) -> Fraction:
    """max over l of rho_l / l, exactly."""
    best = Fraction(0)
    for length, count in enumerate(factor_counts(w), start=1):
        ratio = Fraction(count, length)
        if ratio > best:
            best = ratio
    return best


def interval_mask(start: int, length: int) -> int:
    return ((1 << length) - 1) << start


def constraint_masks(w: Word, minimal: bool = True) -> List[Tuple[int, int, int]]:
    """
    (covered mask, start, length) per distinct factor class, smallest masks first.

    Only the shortest factor of each suffix-tree node is kept: longer factors of
    the same node share its occurrences and cover supersets.
    """
    index = build_index(w)
    by_mask: Dict[int, Tuple[int, int]] = {}
    for node in range(index.node_count):
        length = int(index.node_parent_depth[node]) + 1
        mask = 0
        for start in index.node_occurrences(node).tolist():
            mask |= interval_mask(start, length)
        representative = (int(index.node_first[node]), length)
        current = by_mask.get(mask)
        if current is None or (representative[1], representative[0]) < (current[1], current[0]):
            by_mask[mask] = representative

    ordered = sorted(by_mask.items(), key=lambda item: (item[0].bit_count(), item[1][1], item[1][0]))
    if not minimal:
        return [(mask, start, length) for mask, (start, length) in ordered]

    kept: List[Tuple[int, int, int]] = []
    for mask, (start, length) in ordered:
        if any(k & mask == k for k, _, _ in kept):
            continue
        kept.append((mask, start, length))
    return kept


def constraints(w: Word, minimal: bool = True) -> List[FactorConstraint]:
    """Inclusion-minimal hitting-set constraints; S is an attractor iff it hits each one."""
    return [
        FactorConstraint(representative=FactorOccurrence(start=start, length=length), covered=mask)
        for mask, start, length in constraint_masks(w, minimal=minimal)
    ]
