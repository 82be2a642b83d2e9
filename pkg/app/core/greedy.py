"""
Greedy string attractors of infinite words, built over a growing stream.

Appending w[j] can only break the attractor property through factors that end
at j and never occurred in w[0..j-1]; the shortest of them has length L_j + 1,
where L_j is the longest suffix of w[0..j] already seen in w[0..j-1]. An online
suffix automaton gives L_j as the length of the new state's suffix link.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from ..models.base import AttractorSet, FactorOccurrence, GreedyState, GreedyStep, SequenceSpec, Word
from .attractor import is_attractor
from .config import settings
from .errors import LengthOutOfRangeError, PositionOutOfRangeError, VerificationError
from .sequences import prefix

logger = logging.getLogger(__name__)


@dataclass
class Node:
    length: int = 0
    link: Optional["Node"] = None
    transitions: Dict[int, "Node"] = field(default_factory=dict)


class SuffixAutomaton:
    """Online suffix automaton; `extend` returns L_j for the appended symbol."""

    def __init__(self):
        self.root = Node()
        self.last = self.root
        self.size = 0

    def extend(self, symbol: int) -> int:
        current = Node(length=self.last.length + 1)
        p: Optional[Node] = self.last
        while p is not None and symbol not in p.transitions:
            p.transitions[symbol] = current
            p = p.link
        if p is None:
            current.link = self.root
        else:
            q = p.transitions[symbol]
            if q.length == p.length + 1:
                current.link = q
            else:
                clone = Node(length=p.length + 1, link=q.link, transitions=q.transitions.copy())
                while p is not None and p.transitions.get(symbol) is q:
                    p.transitions[symbol] = clone
                    p = p.link
                q.link = clone
                current.link = clone
        self.last = current
        self.size += 1
        return current.link.length

    def extend_all(self, symbols: Iterable[int]) -> List[int]:
        return [self.extend(symbol) for symbol in symbols]


def _last_at_most(sorted_positions: List[int], j: int) -> int:
    idx = bisect.bisect_right(sorted_positions, j)
    return sorted_positions[idx - 1] if idx else -1


def first_violation(spec: SequenceSpec, S: Iterable[int], j_start: int, j_limit: int) -> Optional[int]:
    """
    Smallest j in [j_start..j_limit] with S not an attractor of w[0..j], assuming
    S is one for every shorter prefix from j_start on.
    """
    if j_limit < j_start:
        return None
    positions = sorted(set(S))
    automaton = SuffixAutomaton()
    for j, symbol in enumerate(prefix(spec, j_limit + 1).symbols):
        seen = automaton.extend(symbol)
        if j < j_start:
            continue
        if seen + 1 <= j - _last_at_most(positions, j):
            return j
    return None


def _run(stream, n: int, label: str) -> GreedyState:
    state = GreedyState()
    automaton = SuffixAutomaton()
    last = -1
    for j, symbol in enumerate(stream):
        if j >= n:
            break
        seen = automaton.extend(symbol)
        if seen + 1 <= j - last:
            state.history.append(
                GreedyStep(
                    index=j,
                    previous=None if last < 0 else last,
                    violating=FactorOccurrence(start=j - seen, length=seen + 1),
                )
            )
            state.positions.append(j)
            last = j
        state.frontier = j + 1
    logger.debug("[greedy] %s n=%s size=%s", label, n, len(state.positions))
    return state


def _spec_stream(spec: SequenceSpec, n: int):
    window = min(settings.GREEDY_INITIAL_WINDOW, n)
    produced = 0
    while produced < n:
        symbols = prefix(spec, window).symbols
        yield from symbols[produced:]
        produced = window
        window = min(2 * window, n)


def greedy_run(spec: SequenceSpec, n: int) -> GreedyState:
    """Greedy construction over w[0..n-1] with the full step history."""
    if n < 1:
        raise LengthOutOfRangeError(n, 1, settings.MAX_PREFIX_LENGTH)
    return _run(_spec_stream(spec, n), n, spec.name)


def greedy_for_word(w: Word) -> GreedyState:
    """The same construction on a finite word; its set is an attractor of w."""
    return _run(iter(w.symbols), len(w), "word")


def greedy_attractor(spec: SequenceSpec, n: int, verify: bool = True) -> AttractorSet:
    state = greedy_run(spec, n)
    result = state.as_set(n)
    if verify:
        verdict = is_attractor(prefix(spec, n), result, label="greedy")
        if not verdict.ok:
            raise VerificationError(
                f"greedy set for {spec.name} at n={n} misses a factor",
                failing=(verdict.failing.start, verdict.failing.length),
            )
    return result


def is_novel(w: Word, p: int, length: int) -> bool:
    """True iff w[p..p+length-1] has no occurrence starting before p."""
    if p < 0 or p >= len(w):
        raise PositionOutOfRangeError(p, len(w))
    if length < 1 or p + length > len(w):
        raise LengthOutOfRangeError(length, 1, len(w) - p)
    text = w.as_bytes()
    return text.find(text[p : p + length], 0, p + length - 1) == -1


def minimal_novel_at(w: Word, j: int) -> Optional[int]:
    """
    Length l of the novel factor w[j-l+1..j] none of whose nonempty proper
    factors is novel, or None when there is none.

    Only the shortest novel suffix can qualify; its proper suffixes are old, so
    it qualifies exactly when its prefix of length l-1 is old too.
    """
    if j < 0 or j >= len(w):
        raise PositionOutOfRangeError(j, len(w))
    automaton = SuffixAutomaton()
    seen = 0
    for symbol in w.symbols[: j + 1]:
        seen = automaton.extend(symbol)
    length = seen + 1
    if length > 1 and is_novel(w, j - length + 1, length - 1):
        return None
    return length
