"""
Greedy numeration systems: base-k, Zeckendorf (Fibonacci) and Tribonacci.

Representations are most-significant digit first; the representation of 0 is
the empty digit word in every system.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from ..models.base import NumerationKind, NumerationSystem
from .errors import AttractorError, DigitOutOfRangeError

BINARY = NumerationSystem(kind=NumerationKind.BASE, base=2)
FIBONACCI = NumerationSystem(kind=NumerationKind.FIBONACCI)
TRIBONACCI = NumerationSystem(kind=NumerationKind.TRIBONACCI)


def trib_number(i: int) -> int:
    """T_0 = 0, T_1 = T_2 = 1, T_i = T_{i-1} + T_{i-2} + T_{i-3}."""
    if i < 0:
        raise AttractorError(f"Tribonacci index must be non-negative, got {i}")
    a, b, c = 0, 1, 1
    for _ in range(i):
        a, b, c = b, c, a + b + c
    return a


def trib_W(i: int) -> int:
    """T_i + T_{i-3} + T_{i-6} + ... down to T_{2 + ((i-2) mod 3)}."""
    if i < 4:
        raise AttractorError(f"W_i is defined for i >= 4, got {i}")
    low = 2 + ((i - 2) % 3)
    return sum(trib_number(j) for j in range(i, low - 1, -3))


def _weights(kind: NumerationKind, count: int) -> List[int]:
    """The first `count` place values, least significant first."""
    if kind == NumerationKind.FIBONACCI:
        weights = [1, 2]
        while len(weights) < count:
            weights.append(weights[-1] + weights[-2])
    else:
        weights = [1, 2, 4]
        while len(weights) < count:
            weights.append(weights[-1] + weights[-2] + weights[-3])
    return weights[:count]


def _weights_up_to(kind: NumerationKind, n: int) -> List[int]:
    count = 1
    while True:
        weights = _weights(kind, count + 1)
        if weights[-1] > n:
            return weights[:count]
        count += 1


def representation(ns: NumerationSystem, n: int) -> Tuple[int, ...]:
    if n < 0:
        raise AttractorError(f"cannot represent negative integer {n}")
    if n == 0:
        return ()
    if ns.kind == NumerationKind.BASE:
        digits = []
        while n:
            n, digit = divmod(n, ns.base)
            digits.append(digit)
        return tuple(reversed(digits))

    digits = []
    remaining = n
    for weight in reversed(_weights_up_to(ns.kind, n)):
        if weight <= remaining:
            digits.append(1)
            remaining -= weight
        else:
            digits.append(0)
    return tuple(digits)


def value(ns: NumerationSystem, digits: Sequence[int]) -> int:
    """Inverse of representation; accepts leading zeros."""
    for digit in digits:
        if digit < 0 or digit >= ns.digit_count:
            raise DigitOutOfRangeError(digit, ns.digit_count)
    if ns.kind == NumerationKind.BASE:
        total = 0
        for digit in digits:
            total = total * ns.base + digit
        return total
    weights = _weights(ns.kind, len(digits))
    return sum(weight * digit for weight, digit in zip(weights, reversed(digits)))


def is_canonical(ns: NumerationSystem, digits: Sequence[int]) -> bool:
    """No leading zero and none of the system's forbidden digit blocks."""
    if digits and digits[0] == 0:
        return False
    if any(d < 0 or d >= ns.digit_count for d in digits):
        return False
    text = "".join(str(d) for d in digits)
    if ns.kind == NumerationKind.FIBONACCI:
        return "11" not in text
    if ns.kind == NumerationKind.TRIBONACCI:
        return "111" not in text
    return True


def format_digits(digits: Sequence[int]) -> str:
    return "".join(str(d) for d in digits) or "0"
