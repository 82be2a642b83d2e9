"""
Appearance and recurrence functions on finite windows, and the attractors
built from them.

A window w[0..W-1] stands in for the infinite word. Every constant estimated
here is recomputed on a window twice as long; a value that moves is flagged
as unstable rather than silently trusted.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..models.base import (
    AppearanceProfile,
    AttractorSet,
    ConstructionResult,
    GrowthClass,
    GrowthEvidence,
    LengthRange,
    NonrecurrentWitness,
    SequenceSpec,
    WindowedSequence,
    Word,
)
from .attractor import build_index, is_attractor, is_attractor_for_lengths
from .config import settings
from .errors import AttractorError, LengthOutOfRangeError, VerificationError, WindowTooSmallError
from .greedy import greedy_run
from .sequences import prefix
from .solver import solve_gamma
from .solver_metrics import record_retirement

logger = logging.getLogger(__name__)

Rational = Union[Fraction, int]

# (position, radius): the point must keep covering every factor occurrence
# that lies within `radius` of it on both sides
Carried = Tuple[int, int]


def windowed(spec: SequenceSpec, W: Optional[int] = None) -> WindowedSequence:
    size = settings.PROFILE_WINDOW if W is None else W
    if size < 8:
        raise WindowTooSmallError(f"window length must be at least 8, got {size}")
    return WindowedSequence(spec=spec, window=prefix(spec, size))


def _word(ws: WindowedSequence, n: int) -> Word:
    if n < 1:
        raise LengthOutOfRangeError(n, 1, settings.MAX_PREFIX_LENGTH)
    return ws.window.prefix(n) if n <= ws.W else prefix(ws.spec, n)


def _check_length(ws: WindowedSequence, length: int, divisor: int) -> None:
    if length < 1 or length > ws.W // divisor:
        raise WindowTooSmallError(
            f"length {length} needs a window of at least {divisor * max(length, 1)} symbols, have W={ws.W}"
        )


def _group_edges(groups: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Masks of the first and last entry of each group."""
    head = np.empty(len(groups), dtype=bool)
    head[0] = True
    head[1:] = groups[1:] != groups[:-1]
    tail = np.empty(len(groups), dtype=bool)
    tail[-1] = True
    tail[:-1] = head[1:]
    return head, tail


# --- appearance / recurrence functions ---------------------------------------


def least_appearance(ws: WindowedSequence, length: int) -> int:
    """Shortest prefix of the window holding an occurrence of every length-`length` factor."""
    _check_length(ws, length, 4)
    groups, starts = build_index(ws.window).factor_groups(length)
    head, _ = _group_edges(groups)
    return int(starts[head].max()) + length


def least_recurrence(ws: WindowedSequence, length: int) -> Optional[int]:
    """
    Shortest m such that every length-m stretch of the window contains every
    length-`length` factor; None (infinite) when that m exceeds W/2.

    The stretches before the first and after the last occurrence count as gaps.
    """
    _check_length(ws, length, 8)
    groups, starts = build_index(ws.window).factor_groups(length)
    head, tail = _group_edges(groups)
    m = max(int(starts[head].max()) + length, ws.W - int(starts[tail].min()))
    inner = ~head[1:]
    if inner.any():
        m = max(m, int(np.diff(starts)[inner].max()) + length - 1)
    return None if m > ws.W // 2 else m


def default_profile_length(W: int) -> int:
    """W/32, capped by PROFILE_MAX_LENGTH; recurrence values near 10l stay below the W/2 cutoff."""
    return max(1, min(W // 32, settings.PROFILE_MAX_LENGTH))


def _profile(
    kind: str,
    ws: WindowedSequence,
    max_length: Optional[int],
    compute: Callable[[WindowedSequence, int], Optional[int]],
    check_stability: bool,
) -> AppearanceProfile:
    limit = ws.W // 8
    ell_max = default_profile_length(ws.W) if max_length is None else max_length
    if ell_max < 1 or ell_max > limit:
        raise WindowTooSmallError(f"max length {ell_max} outside [1..{limit}] for W={ws.W}")

    values = tuple(compute(ws, ell) for ell in range(1, ell_max + 1))
    estimate: Optional[Fraction] = None
    if all(value is not None for value in values):
        estimate = max(Fraction(value, ell) for ell, value in enumerate(values, start=1))

    stable = False
    if check_stability:
        doubled = windowed(ws.spec, 2 * ws.W)
        stable = tuple(compute(doubled, ell) for ell in range(1, ell_max + 1)) == values
        if not stable:
            logger.warning(
                "[recurrence] %s profile of %s changed between W=%s and W=%s", kind, ws.spec.name, ws.W, 2 * ws.W
            )

    logger.debug("[recurrence] %s %s W=%s lmax=%s estimate=%s", kind, ws.spec.name, ws.W, ell_max, estimate)
    return AppearanceProfile(
        kind=kind,
        window=ws.W,
        max_length=ell_max,
        values=values,
        estimate_num=None if estimate is None else estimate.numerator,
        estimate_den=None if estimate is None else estimate.denominator,
        stable=stable,
    )


def appearance_profile(
    ws: WindowedSequence, max_length: Optional[int] = None, check_stability: bool = True
) -> AppearanceProfile:
    """least_appearance for l = 1..max_length (default W/32) and A = max m/l."""
    return _profile("appearance", ws, max_length, least_appearance, check_stability)


def recurrence_profile(
    ws: WindowedSequence, max_length: Optional[int] = None, check_stability: bool = True
) -> AppearanceProfile:
    """least_recurrence for l = 1..max_length; the estimate is None when any value is infinite."""
    return _profile("recurrence", ws, max_length, least_recurrence, check_stability)


appearance_constant_estimate = appearance_profile
recurrence_constant_estimate = recurrence_profile


# --- constructions -----------------------------------------------------------


def _as_constant(value: Rational, what: str) -> Fraction:
    constant = Fraction(value)
    if constant < 1:
        raise AttractorError(f"{what} must be at least 1, got {constant}")
    return constant


def stride_points(n: int, s: int, A: Fraction) -> List[int]:
    """s-1, 2s-1, ... up to the prefix of length min(n, 2As); never empty."""
    limit = min(Fraction(n), 2 * A * s)
    points = []
    t = 1
    while t * s <= limit:
        points.append(t * s - 1)
        t += 1
    return points or [min(s - 1, n - 1)]


def level_size(A: Fraction) -> int:
    """Points per level: ceil(3A) points 2s apart reach past 6As."""
    return max(1, math.ceil(3 * A))


def level_points(n: int, s: int, A: Fraction, offset: int = 0) -> List[int]:
    """
    level_size(A) points from offset+s-1 on, 2s apart, when they end by n-1-s;
    otherwise the same number squeezed evenly into [offset+s-1, n-1-s].

    Every point keeps s/2 of room on both sides inside the prefix, so it can be
    moved that far without losing the factors of lengths [3s..6s] it covers.
    """
    size = level_size(A)
    first = offset + s - 1
    last = n - 1 - s
    if last < first:
        return []
    if first + 2 * s * (size - 1) <= last:
        return [first + 2 * s * t for t in range(size)]
    if size == 1:
        return [first]
    span = last - first
    return sorted({first + span * t // (size - 1) for t in range(size)})


def stride_attractor(ws: WindowedSequence, n: int, s: int, A: Rational) -> AttractorSet:
    """Attractor of w[0..n-1] for the factor lengths [s..2s]."""
    if s < 1:
        raise AttractorError(f"stride must be positive, got {s}")
    A = _as_constant(A, "appearance constant")
    w = _word(ws, n)
    result = AttractorSet.of(stride_points(n, s, A), n)
    verdict = is_attractor_for_lengths(w, result, LengthRange.between(s, 2 * s), label="stride")
    if not verdict.ok:
        raise VerificationError(
            f"stride {s} set {result} misses factor ({verdict.failing.start}, {verdict.failing.length}) "
            f"of {ws.spec.name} at n={n}; appearance constant {A} is too small",
            failing=(verdict.failing.start, verdict.failing.length),
        )
    return result


def dyadic_attractor(ws: WindowedSequence, n: int, A: Rational) -> AttractorSet:
    """Union of stride attractors for s = 1, 3, 7, ..., 2^k-1 until 2^(k+1)-2 >= n."""
    A = _as_constant(A, "appearance constant")
    w = _word(ws, n)
    points = set()
    s = 1
    while True:
        points.update(stride_attractor(ws, n, s, A).positions)
        if 2 * s >= n:
            break
        s = 2 * s + 1
    result = AttractorSet.of(points, n)
    verdict = is_attractor(w, result, label="dyadic")
    if not verdict.ok:
        raise VerificationError(
            f"dyadic set for {ws.spec.name} at n={n} misses a factor",
            failing=(verdict.failing.start, verdict.failing.length),
        )
    logger.debug("[recurrence] dyadic %s n=%s levels<=%s size=%s", ws.spec.name, n, s, len(result))
    return result


def _ceil_log2(value: Fraction) -> int:
    exponent = 0
    while 2**exponent < value:
        exponent += 1
    return exponent


def chain_count(R: Rational, c0: int = 0) -> int:
    """
    Number of chains k so that a level 2^k above another sees, within s/2 of
    each of its points, a copy of every radius-(6s'-1) context of the lower one.

    Copies of a length-m factor start at most R*m - m apart, so 2^k >= 12(R-1)
    suffices; this is ceil(log2 R) plus a constant.
    """
    return max(1, _ceil_log2(12 * (Fraction(R) - 1))) + c0


def _level_count(n: int) -> int:
    k = 0
    while 6 * 2**k < n:
        k += 1
    return k + 1


def _copies(text: bytes, x: int, radius: int, p: int, half: int, floor: int) -> List[int]:
    """Positions q within `half` of p and not below `floor` whose surroundings repeat those of x, nearest first."""
    n = len(text)
    before = min(radius, x)
    after = min(radius, n - 1 - x)
    context = text[x - before : x + after + 1]
    lo = max(p - half, before, floor)
    hi = min(p + half, n - 1 - after)
    found: List[int] = []
    if lo > hi:
        return found
    end = hi + after + 1
    start = text.find(context, lo - before, end)
    while start != -1:
        found.append(start + before)
        start = text.find(context, start + 1, end)
    return sorted(found, key=lambda q: (abs(q - p), q))


def _free_near(p: int, half: int, floor: int, n: int, blocked: Set[int]) -> int:
    for delta in range(half + 1):
        for q in (p - delta, p + delta):
            if floor <= q < n and q not in blocked:
                return q
    return p


def _match(options: Sequence[Sequence[int]]) -> Dict[int, int]:
    """Maximum matching of rows onto columns by augmenting paths; returns column -> row."""
    owner: Dict[int, int] = {}

    def augment(row: int, seen: Set[int]) -> bool:
        for col in options[row]:
            if col in seen:
                continue
            seen.add(col)
            if col not in owner or augment(owner[col], seen):
                owner[col] = row
                return True
        return False

    for row in range(len(options)):
        augment(row, set())
    return owner


def _absorb(
    text: bytes,
    carried: Sequence[Carried],
    fresh: Sequence[int],
    s: int,
    floor: int,
    taken: Optional[Set[int]],
    label: str,
) -> Tuple[List[Carried], List[Carried]]:
    """
    Move fresh level points by at most s/2 so that each takes over one carried
    point; positions in `taken` are avoided. Returns the placed level points and
    the carried points nobody could take over.
    """
    n = len(text)
    half = s // 2
    blocked = set() if taken is None else taken
    copies = [
        [[q for q in _copies(text, x, radius, p, half, floor) if q not in blocked] for p in fresh]
        for x, radius in carried
    ]
    banned: Set[Tuple[int, int]] = set()
    while True:
        options = [
            [col for col in range(len(fresh)) if copies[row][col] and (row, col) not in banned]
            for row in range(len(carried))
        ]
        owner = _match(options)
        used: Set[int] = set()
        moved: Dict[int, int] = {}
        clash: Optional[Tuple[int, int]] = None
        for col in sorted(owner):
            row = owner[col]
            q = next((q for q in copies[row][col] if q not in used), None)
            if q is None:
                clash = (row, col)
                break
            used.add(q)
            moved[col] = q
        if clash is None:
            break
        banned.add(clash)

    placed: List[Carried] = []
    for col, p in enumerate(fresh):
        if col in moved:
            q = moved[col]
            record_retirement(label)
        else:
            q = _free_near(p, half, floor, n, blocked | used)
            used.add(q)
        placed.append((q, 6 * s - 1))
    matched = set(owner.values())
    leftovers = [point for row, point in enumerate(carried) if row not in matched]
    return placed, leftovers


def _assemble(
    text: bytes, base: Sequence[int], levels: Sequence[Sequence[int]], kept: int, label: str
) -> Tuple[List[int], bool]:
    """
    Level j takes over the points carried by level j - kept, so the levels form
    `kept` chains; the result is the base plus what the top `kept` levels carry.
    """
    floor = base[-1] + 1 if base else 0
    chosen: Set[int] = set(base)
    carried: List[List[Carried]] = []
    achieved = True
    first_top = max(0, len(levels) - kept)
    for j, fresh in enumerate(levels):
        top = j >= first_top
        below = carried[j - kept] if j >= kept else []
        placed, leftovers = _absorb(text, below, fresh, 2**j, floor, chosen if top else None, label)
        achieved = achieved and not leftovers
        carried.append(placed + leftovers)
        if top:
            chosen.update(q for q, _ in carried[j])
    return sorted(chosen), achieved


def recurrent_construction(
    ws: WindowedSequence,
    n: int,
    A: Rational,
    R: Optional[Rational],
    c0: Optional[int] = None,
    label: str = "recurrent",
) -> ConstructionResult:
    """
    Base level [1..2] plus levels [3s..6s] for s = 1, 2, 4, ..., 2^k, with the
    points of lower levels taken over by perturbed points higher up, so that
    only chain_count(R, c0) chains of points survive.

    Once n has that many levels the size is len(base) + chains * level_size(A)
    whenever every retirement finds a copy (bound_achieved).
    """
    if R is None:
        raise AttractorError(
            f"{ws.spec.name} has no finite recurrence constant on W={ws.W}; use dyadic_attractor instead"
        )
    A = _as_constant(A, "appearance constant")
    R = _as_constant(R, "recurrence constant")
    c = settings.RETIREMENT_C0 if c0 is None else c0
    if c < 0:
        raise AttractorError(f"c0 must be non-negative, got {c}")

    w = _word(ws, n)
    text = w.as_bytes()
    base = stride_points(n, 1, A)
    levels = [level_points(n, 2**j, A, offset=len(base)) for j in range(_level_count(n))]

    while True:
        kept = chain_count(R, c)
        positions, achieved = _assemble(text, base, levels, kept, label)
        verdict = is_attractor(w, positions, label=label)
        if verdict.ok:
            break
        if kept >= len(levels):
            raise VerificationError(
                f"all {len(levels)} levels for {ws.spec.name} at n={n} still miss a factor; "
                f"appearance constant {A} is too small",
                failing=(verdict.failing.start, verdict.failing.length),
            )
        c += 1
        logger.info(
            "[recurrence] %s n=%s misses factor (%s, %s); raising c0 to %s",
            ws.spec.name,
            n,
            verdict.failing.start,
            verdict.failing.length,
            c,
        )

    if not achieved:
        logger.warning("[recurrence] %s n=%s: some points found no copy to move to; size bound not achieved", ws.spec.name, n)
    logger.debug("[recurrence] %s n=%s levels=%s kept=%s size=%s", ws.spec.name, n, len(levels), kept, len(positions))
    return ConstructionResult(
        positions=tuple(positions),
        n=n,
        verified=True,
        levels=len(levels),
        kept_levels=min(kept, len(levels)),
        c0=c,
        bound_achieved=achieved,
    )


def recurrent_attractor(
    ws: WindowedSequence, n: int, A: Rational, R: Optional[Rational], c0: Optional[int] = None
) -> AttractorSet:
    result = recurrent_construction(ws, n, A, R, c0=c0)
    return AttractorSet.of(result.positions, n)


# --- growth evidence ---------------------------------------------------------


def nonrecurrent_positions(ws: WindowedSequence, max_length: Optional[int] = None) -> List[NonrecurrentWitness]:
    """
    Starts i < W/4 of a factor with no second occurrence in the window, each
    with the shortest such factor; only lengths up to W / divisor are examined.
    """
    W = ws.W
    limit = W // settings.NONRECURRENT_LENGTH_DIVISOR if max_length is None else max_length
    index = build_index(ws.window)
    starts = np.arange((W + 3) // 4, dtype=np.int64)
    ranks = index.rank[starts]
    following = np.zeros(W, dtype=np.int64)
    following[:-1] = index.lcp[1:]
    need = np.maximum(index.lcp[ranks], following[ranks]) + 1
    ok = (need <= limit) & (starts + need <= W)
    return [NonrecurrentWitness(start=int(i), length=int(length)) for i, length in zip(starts[ok], need[ok])]


def disjoint_witnesses(witnesses: Iterable[NonrecurrentWitness]) -> List[NonrecurrentWitness]:
    """Pairwise-disjoint witnesses, earliest end first."""
    chosen: List[NonrecurrentWitness] = []
    last_end = -1
    for witness in sorted(witnesses, key=lambda item: (item.end, item.start)):
        if witness.start > last_end:
            chosen.append(witness)
            last_end = witness.end
    return chosen


def _size_at(
    spec: SequenceSpec, ws: WindowedSequence, n: int, A: Optional[Fraction], R: Optional[Fraction]
) -> Tuple[int, str]:
    if n <= settings.CLASSIFY_EXACT_MAX_N:
        solution = solve_gamma(prefix(spec, n), label="classify")
        if solution.proven:
            return solution.size, "exact"
    if A is not None and R is not None:
        try:
            return recurrent_construction(ws, n, A, R, label="classify").size, "recurrent"
        except VerificationError as exc:
            logger.warning("[recurrence] %s n=%s: recurrent construction failed (%s); using greedy", spec.name, n, exc)
    return len(greedy_run(spec, n).positions), "greedy"


def classify_growth(
    spec: SequenceSpec, n_points: Sequence[int], window: Optional[int] = None
) -> GrowthEvidence:
    """Heuristic constant / logarithmic call from attractor sizes and non-recurrence evidence."""
    points = sorted(set(n_points))
    if len(points) < 5:
        raise AttractorError(f"classify_growth needs at least 5 distinct sample points, got {len(points)}")
    if points[0] < 1:
        raise LengthOutOfRangeError(points[0], 1, settings.MAX_PREFIX_LENGTH)

    W = 4 * points[-1] if window is None else window
    ws = windowed(spec, W)
    ell_max = default_profile_length(W)
    A = appearance_profile(ws, ell_max).estimate
    R = recurrence_profile(ws, ell_max).estimate

    sizes: List[int] = []
    sources: List[str] = []
    for n in points:
        size, source = _size_at(spec, ws, n, A, R)
        sizes.append(size)
        sources.append(source)

    x = np.log2(np.asarray(points, dtype=np.float64))
    y = np.asarray(sizes, dtype=np.float64)
    constant_residual = float(((y - y.mean()) ** 2).sum())
    slope, intercept = np.polyfit(x, y, 1)
    log_residual = float(((y - (slope * x + intercept)) ** 2).sum())

    witnesses = nonrecurrent_positions(ws)
    disjoint = disjoint_witnesses(witnesses)
    if log_residual < 0.5 * constant_residual and len(disjoint) >= 3:
        classification = GrowthClass.LOGARITHMIC
    elif len(set(sizes[-3:])) == 1 and not witnesses:
        classification = GrowthClass.CONSTANT
    else:
        classification = GrowthClass.INCONCLUSIVE

    logger.info(
        "[recurrence] classify %s: %s sizes=%s sources=%s disjoint=%s",
        spec.name,
        classification.value,
        sizes,
        sources,
        len(disjoint),
    )
    return GrowthEvidence(
        classification=classification,
        n_points=tuple(points),
        sizes=tuple(sizes),
        size_sources=tuple(sources),
        constant_residual=constant_residual,
        log_residual=log_residual,
        window=W,
        nonrecurrent=tuple(witnesses),
        disjoint_witnesses=len(disjoint),
    )
