"""
Suffix array, LCP array and the suffix-tree node table of a word.

Every distinct nonempty factor of the word belongs to exactly one node: a node
with string depth d and parent depth pd stands for the factors of lengths
pd+1..d that share the node's occurrence set sa[lb..rb].
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models.base import LengthRange
from .errors import EmptyWordError

logger = logging.getLogger(__name__)

INF = np.int64(1 << 60)


def suffix_array(symbols: Sequence[int]) -> np.ndarray:
    """Prefix doubling: sort by (rank[i], rank[i+k]) until all ranks are distinct."""
    n = len(symbols)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.asarray(symbols, dtype=np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        first_sorted = rank[order]
        second_sorted = second[order]
        changed = np.empty(n, dtype=bool)
        changed[0] = True
        changed[1:] = (first_sorted[1:] != first_sorted[:-1]) | (second_sorted[1:] != second_sorted[:-1])
        new_rank = np.cumsum(changed) - 1
        rank = np.empty(n, dtype=np.int64)
        rank[order] = new_rank
        if new_rank[-1] == n - 1:
            return order.astype(np.int64)
        k *= 2


def lcp_array(symbols: Sequence[int], sa: np.ndarray) -> np.ndarray:
    """Kasai: lcp[r] = lcp(suffix sa[r-1], suffix sa[r]); lcp[0] = 0."""
    n = len(symbols)
    text = list(symbols)
    order = sa.tolist()
    rank = [0] * n
    for r, start in enumerate(order):
        rank[start] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = order[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


class RangeMin:
    """Sparse table answering min(values[lb..rb]) for arrays of ranges."""

    def __init__(self, values: np.ndarray):
        self.levels: List[np.ndarray] = [np.asarray(values, dtype=np.int64)]
        width = 1
        while 2 * width <= len(values):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2

    def query(self, lb: np.ndarray, rb: np.ndarray) -> np.ndarray:
        lb = np.asarray(lb, dtype=np.int64)
        rb = np.asarray(rb, dtype=np.int64)
        out = np.empty(len(lb), dtype=np.int64)
        if len(lb) == 0:
            return out
        level_of = np.frexp((rb - lb + 1).astype(np.float64))[1] - 1
        for level in np.unique(level_of):
            mask = level_of == level
            table = self.levels[int(level)]
            out[mask] = np.minimum(table[lb[mask]], table[rb[mask] - (1 << int(level)) + 1])
        return out


class SuffixIndex:
    """Read-only index over one word; safe to share between threads."""

    def __init__(self, symbols: Sequence[int]):
        self.symbols: List[int] = list(symbols)
        self.n = len(self.symbols)
        if self.n == 0:
            raise EmptyWordError("cannot index the empty word")
        self.sa = suffix_array(self.symbols)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[self.sa] = np.arange(self.n, dtype=np.int64)
        self.lcp = lcp_array(self.symbols, self.sa)
        self._lcp_list = self.lcp.tolist()
        self._build_nodes()

    def _build_nodes(self) -> None:
        n = self.n
        sa = self.sa.tolist()
        lcp = self._lcp_list
        depth: List[int] = []
        parent_depth: List[int] = []
        lbs: List[int] = []
        rbs: List[int] = []

        # bottom-up traversal of lcp-intervals; the root (depth 0) is never emitted
        stack: List[Tuple[int, int]] = [(0, 0)]
        for i in range(1, n + 1):
            cur = lcp[i] if i < n else 0
            lb = i - 1
            while cur < stack[-1][0]:
                top_depth, top_lb = stack.pop()
                depth.append(top_depth)
                parent_depth.append(max(cur, stack[-1][0]))
                lbs.append(top_lb)
                rbs.append(i - 1)
                lb = top_lb
            if cur > stack[-1][0]:
                stack.append((cur, lb))

        for r in range(n):
            leaf_depth = n - sa[r]
            above = max(lcp[r], lcp[r + 1] if r + 1 < n else 0)
            if leaf_depth > above:
                depth.append(leaf_depth)
                parent_depth.append(above)
                lbs.append(r)
                rbs.append(r)

        self.node_depth = np.asarray(depth, dtype=np.int64)
        self.node_parent_depth = np.asarray(parent_depth, dtype=np.int64)
        self.node_lb = np.asarray(lbs, dtype=np.int64)
        self.node_rb = np.asarray(rbs, dtype=np.int64)
        self.node_first = RangeMin(self.sa).query(self.node_lb, self.node_rb)
        logger.debug("[index] n=%s nodes=%s", n, len(depth))

    @property
    def node_count(self) -> int:
        return len(self.node_depth)

    def node_occurrences(self, node: int) -> np.ndarray:
        return np.sort(self.sa[self.node_lb[node] : self.node_rb[node] + 1])

    def _gaps(self, positions: np.ndarray) -> np.ndarray:
        """g[p] = (smallest position >= p) - p, INF when there is none."""
        starts = np.arange(self.n, dtype=np.int64)
        idx = np.searchsorted(positions, starts, side="left")
        gaps = np.full(self.n, INF, dtype=np.int64)
        found = idx < len(positions)
        gaps[found] = positions[idx[found]] - starts[found]
        return gaps

    def first_uncovered(
        self, positions: Sequence[int], lengths: Optional[LengthRange] = None
    ) -> Optional[Tuple[int, int]]:
        """
        Shortest, then leftmost, factor with no occurrence touching `positions`.

        Returns (first occurrence start, length) or None when every factor whose
        length lies in `lengths` (all lengths when None) is covered.
        """
        pos = np.unique(np.asarray(positions, dtype=np.int64))
        gaps_by_rank = self._gaps(pos)[self.sa]
        # a node's factor of length l is covered iff some occurrence has gap <= l-1
        nearest = RangeMin(gaps_by_rank).query(self.node_lb, self.node_rb)
        low = self.node_parent_depth + 1
        high = np.minimum(self.node_depth, nearest)
        if lengths is None:
            ell = np.where(low <= high, low, INF)
        else:
            ell = np.full(len(low), INF, dtype=np.int64)
            for a, b in lengths.intervals:
                candidate = np.maximum(low, a)
                ok = candidate <= np.minimum(high, b)
                ell = np.where(ok, np.minimum(ell, candidate), ell)
        failing = np.flatnonzero(ell < INF)
        if len(failing) == 0:
            return None
        order = np.lexsort((self.node_first[failing], ell[failing]))
        best = failing[order[0]]
        return int(self.node_first[best]), int(ell[best])

    def distinct_counts(self) -> np.ndarray:
        """counts[l] = number of distinct length-l factors, for l = 0..n (counts[0] = 0)."""
        diff = np.zeros(self.n + 2, dtype=np.int64)
        np.add.at(diff, self.lcp + 1, 1)
        np.add.at(diff, self.n - self.sa + 1, -1)
        return np.cumsum(diff)[: self.n + 1]

    def factor_groups(self, length: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        (group, start) for every occurrence of every length-`length` factor,
        sorted by group then start; one group per distinct factor.
        """
        group = np.cumsum(self.lcp < length)
        ranks = np.flatnonzero(self.n - self.sa >= length)
        groups = group[ranks]
        starts = self.sa[ranks]
        order = np.lexsort((starts, groups))
        return groups[order], starts[order]
