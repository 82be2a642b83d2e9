"""
Closed-form attractor families and closed-form gamma/span values.

Each family function returns a FamilyResult that has already been checked
against the verifier on the corresponding prefix. Lengths outside every
printed interval come back with applicable=False instead of an extrapolated
set.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from ..models.base import FamilyResult, PdReadingRow, SpanReportRow
from .attractor import is_attractor
from .errors import AttractorError, FamilyNotApplicableError, SequenceSpecError
from .numeration import trib_number, trib_W
from .sequences import builtin_spec, prefix

logger = logging.getLogger(__name__)

Claim = Tuple[str, int, Tuple[int, ...]]


def _verified(seq: str, n: int, claim: Optional[Claim]) -> FamilyResult:
    if claim is None:
        return FamilyResult(n=n, family=f"{seq}:none", applicable=False)
    family_id, i, positions = claim
    positions = tuple(sorted(set(positions)))
    verdict = is_attractor(prefix(builtin_spec(seq), n), positions, label=f"family:{seq}")
    if not verdict.ok:
        logger.warning(
            "[families] %s:%s:i=%s fails at n=%s on factor (%s, %s)",
            seq,
            family_id,
            i,
            n,
            verdict.failing.start,
            verdict.failing.length,
        )
    return FamilyResult(
        n=n,
        family=f"{seq}:{family_id}:i={i}",
        positions=positions,
        claimed_size=len(positions),
        applicable=True,
        verified=verdict.ok,
        failing=verdict.failing,
    )


def _require(n: int, minimum: int, seq: str) -> None:
    if n < minimum:
        raise FamilyNotApplicableError(f"{seq} family needs n >= {minimum}, got {n}")


def _exponents(n: int) -> range:
    return range(0, n.bit_length() + 3)


# --- Thue-Morse --------------------------------------------------------------


def _tm_claims(n: int) -> List[Claim]:
    found: List[Claim] = []
    for i in _exponents(n):
        if i >= 2 and 13 * 2 ** (i - 2) - 1 <= n <= 5 * 2**i:
            found.append(("a", i, (2**i - 1, 3 * 2 ** (i - 1) - 1, 2 ** (i + 1) - 1, 3 * 2**i - 1)))
    for i in _exponents(n):
        if i >= 1 and 9 * 2 ** (i - 1) - 1 <= n <= 3 * 2 ** (i + 1):
            found.append(("b", i, (3 * 2 ** (i - 1) - 1, 2 ** (i + 1) - 1, 3 * 2**i - 1, 2 ** (i + 2) - 1)))
    for i in _exponents(n):
        if i >= 1 and 3 * 2 ** (i + 1) - 1 <= n <= 13 * 2 ** (i - 1):
            found.append(("c", i, (3 * 2 ** (i - 1) - 1, 2 ** (i + 1) - 1, 2 ** (i + 2) - 1, 5 * 2**i - 1)))
    return found


def tm_family(n: int) -> FamilyResult:
    """Size-4 Thue-Morse attractor; claims are preferred in the order a, b, c."""
    _require(n, 12, "tm")
    claims = _tm_claims(n)
    return _verified("tm", n, claims[0] if claims else None)


def tm_gamma_closed(n: int) -> int:
    if n < 1:
        raise AttractorError(f"n must be positive, got {n}")
    if n == 1:
        return 1
    if n <= 6:
        return 2
    if 7 <= n <= 14 or 17 <= n <= 24:
        return 3
    return 4


# --- Tribonacci --------------------------------------------------------------


def trib_family(n: int) -> FamilyResult:
    """{T_{i-2}-1, T_{i-1}-1, T_i-1} for W_i <= n < W_{i+1}."""
    _require(n, 4, "trib")
    i = 4
    while trib_W(i + 1) <= n:
        i += 1
    positions = (trib_number(i - 2) - 1, trib_number(i - 1) - 1, trib_number(i) - 1)
    return _verified("trib", n, ("size3", i, positions))


# --- ternary Thue-Morse ------------------------------------------------------


def _vtm_claims(n: int) -> List[Claim]:
    found: List[Claim] = []
    for i in _exponents(n):
        if i < 2:
            continue
        if 13 * 2 ** (i - 2) <= n < 5 * 2**i:
            found.append(("a", i, (2**i - 1, 3 * 2 ** (i - 1) - 1, 2 ** (i + 1) - 1, 3 * 2**i - 1)))
        if 5 * 2**i <= n < 6 * 2**i:
            found.append(("b", i, (2**i - 1, 2 ** (i + 1) - 1, 3 * 2**i - 1, 9 * 2 ** (i - 1) - 1)))
        if 6 * 2**i <= n < 13 * 2 ** (i - 1):
            found.append(("c", i, (3 * 2 ** (i - 1) - 1, 2 ** (i + 1) - 1, 2 ** (i + 2) - 1, 5 * 2**i - 1)))
    found.sort(key=lambda claim: claim[0])
    return found


def vtm_family(n: int) -> FamilyResult:
    _require(n, 13, "vtm")
    claims = _vtm_claims(n)
    return _verified("vtm", n, claims[0] if claims else None)


def vtm_gamma_closed(n: int) -> int:
    if n < 1:
        raise AttractorError(f"n must be positive, got {n}")
    if n <= 2:
        return n
    if n <= 6:
        return 3
    return 4


# --- powers of two -----------------------------------------------------------


def _pow2_cases(n: int) -> List[Claim]:
    found: List[Claim] = []
    i = 0
    while 3 * 4**i <= n:
        if n < 6 * 4**i:
            found.append(("a", i, tuple(2 * 4**j - 1 for j in range(i + 1)) + (3 * 4**i - 1,)))
        elif n < 12 * 4**i:
            found.append(("b", i, tuple(4**j - 1 for j in range(i + 2)) + (6 * 4**i - 1,)))
        i += 1
    return found


def pow2_family(n: int) -> FamilyResult:
    """Cardinality i+2 (case a) or i+3 (case b) attractor of the powers-of-two word."""
    _require(n, 3, "pow2")
    cases = _pow2_cases(n)
    return _verified("pow2", n, cases[0] if cases else None)


# --- period doubling ---------------------------------------------------------


def _pd_claim(n: int) -> Optional[Claim]:
    i = n.bit_length() - 1
    # 2^i <= n < 2^(i+1): either below 3*2^(i-1) or inside [3*2^(i-1), 2^(i+1))
    if i >= 3 and n < 3 * 2 ** (i - 1):
        return ("A", i, (3 * 2 ** (i - 3) - 1, 3 * 2 ** (i - 2) - 1))
    j = i - 1
    if j >= 1 and 3 * 2**j <= n < 2 ** (j + 2):
        return ("B", j, (2**j - 1, 2 ** (j + 1) - 1))
    return None


def _pd_literal_claim(n: int) -> Optional[Claim]:
    """Case 1 exactly as printed; the printed case 2 interval is empty."""
    i = n.bit_length() - 1
    if i >= 3 and 2**i <= n < 3 * 2**i:
        return ("literal", i, (3 * 2 ** (i - 3) - 1, 3 * 2 ** (i - 2) - 1))
    return None


def pd_family(n: int, literal: bool = False) -> FamilyResult:
    """
    Size-2 period-doubling attractor.

    Default reading: {3*2^(i-3)-1, 3*2^(i-2)-1} for 2^i <= n < 3*2^(i-1) and
    {2^i-1, 2^(i+1)-1} for 3*2^i <= n < 2^(i+2); together they cover n >= 6.
    """
    _require(n, 6, "pd")
    claim = _pd_literal_claim(n) if literal else _pd_claim(n)
    return _verified("pd", n, claim)


def pd_family_reading_sweep(n_max: int, n_min: int = 6) -> List[PdReadingRow]:
    rows: List[PdReadingRow] = []
    for n in range(max(n_min, 6), n_max + 1):
        default = pd_family(n)
        literal = pd_family(n, literal=True)
        rows.append(
            PdReadingRow(
                n=n,
                literal_family=literal.family if literal.applicable else None,
                literal_verified=literal.verified,
                default_family=default.family,
                default_verified=bool(default.verified),
            )
        )
    return rows


def pd_minspan_closed(n: int) -> Optional[int]:
    """None where no printed case applies (n = 2 and n = 5)."""
    if n < 1:
        raise AttractorError(f"n must be positive, got {n}")
    if n == 1:
        return 0
    if n in (3, 4):
        return 1
    i = 1
    while 3 * 2**i <= n:
        if n < 3 * 2 ** (i + 1):
            return 2**i
        i += 1
    return None


def pd_maxspan_closed(n: int) -> Optional[int]:
    """None where no printed case applies (n = 4, 10, 22, 46, ...)."""
    if n < 1:
        raise AttractorError(f"n must be positive, got {n}")
    if n == 1:
        return 0
    if n <= 3:
        return 1
    for i in range(1, n.bit_length() + 2):
        if 5 * 2 ** (i - 1) - 1 <= n < 6 * 2 ** (i - 1) - 2:
            return 2**i
    for i in range(0, n.bit_length() + 2):
        if 6 * 2**i - 1 <= n <= 5 * 2 ** (i + 1) - 2:
            return 3 * 2**i
    return None


def pd_span_report(n_max: int, n_min: int = 1, timeout_seconds: Optional[float] = None) -> List[SpanReportRow]:
    """Exact minspan/maxspan of pd prefixes beside the closed forms."""
    from .solver import span_extremes

    spec = builtin_spec("pd")
    rows: List[SpanReportRow] = []
    for n in range(max(n_min, 1), n_max + 1):
        spans = span_extremes(prefix(spec, n), timeout_seconds=timeout_seconds, label="pd-span")
        if not spans.proven:
            logger.warning("[families] pd span search at n=%s did not finish; row skipped", n)
            continue
        rows.append(
            SpanReportRow(
                n=n,
                minspan=spans.minspan,
                maxspan=spans.maxspan,
                minspan_closed=pd_minspan_closed(n),
                maxspan_closed=pd_maxspan_closed(n),
            )
        )
    return rows


# --- dispatch and coverage ---------------------------------------------------

FAMILIES: Dict[str, Callable[[int], FamilyResult]] = {
    "tm": tm_family,
    "pd": pd_family,
    "vtm": vtm_family,
    "trib": trib_family,
    "pow2": pow2_family,
}


def family_for(name: str, n: int) -> FamilyResult:
    try:
        family = FAMILIES[name]
    except KeyError:
        raise SequenceSpecError(f"no closed-form family for {name!r}; known: {', '.join(FAMILIES)}") from None
    return family(n)


def _uncovered(claims_at: Callable[[int], Iterable[Claim]], n_min: int, n_max: int) -> List[int]:
    return [n for n in range(n_min, n_max + 1) if not list(claims_at(n))]


def tm_claim_cover(n_max: int) -> List[int]:
    """n in [12..n_max] with no applicable Thue-Morse claim."""
    return _uncovered(_tm_claims, 12, n_max)


def vtm_claim_cover(n_max: int) -> List[int]:
    return _uncovered(_vtm_claims, 13, n_max)


def pow2_case_cover(n_max: int) -> List[int]:
    return _uncovered(_pow2_cases, 3, n_max)


def pd_reading_cover(n_max: int) -> List[int]:
    return [n for n in range(6, n_max + 1) if _pd_claim(n) is None]
