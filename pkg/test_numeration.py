import pytest

from app.core.errors import AttractorError, DigitOutOfRangeError
from app.core.numeration import (
    BINARY,
    FIBONACCI,
    TRIBONACCI,
    format_digits,
    is_canonical,
    representation,
    trib_number,
    trib_W,
    value,
)
from app.models.base import NumerationKind, NumerationSystem


def test_base_representation_is_msd_first():
    assert representation(BINARY, 6) == (1, 1, 0)
    assert representation(NumerationSystem(base=3), 5) == (1, 2)
    assert representation(BINARY, 0) == ()
    assert format_digits(()) == "0"


def test_greedy_representations():
    assert representation(FIBONACCI, 4) == (1, 0, 1)
    assert representation(FIBONACCI, 7) == (1, 0, 1, 0)
    assert representation(TRIBONACCI, 7) == (1, 0, 0, 0)
    assert representation(TRIBONACCI, 8) == (1, 0, 0, 1)


def test_representations_are_canonical_and_invert():
    for ns in (BINARY, FIBONACCI, TRIBONACCI):
        for n in range(1, 120):
            digits = representation(ns, n)
            assert is_canonical(ns, digits)
            assert value(ns, digits) == n


def test_value_accepts_leading_zeros_and_rejects_bad_digits():
    assert value(TRIBONACCI, (0, 1, 0, 0, 0)) == 7
    assert not is_canonical(TRIBONACCI, (0, 1))
    assert not is_canonical(TRIBONACCI, (1, 1, 1))
    assert not is_canonical(FIBONACCI, (1, 1))
    with pytest.raises(DigitOutOfRangeError):
        value(BINARY, (1, 2))


def test_negative_input_is_rejected():
    with pytest.raises(AttractorError):
        representation(BINARY, -1)


def test_tribonacci_numbers_and_w():
    assert [trib_number(i) for i in range(8)] == [0, 1, 1, 2, 4, 7, 13, 24]
    assert trib_W(4) == 4
    assert trib_W(5) == 8
    assert trib_W(7) == 28
    with pytest.raises(AttractorError):
        trib_W(3)


def test_non_base_systems_only_use_binary_digits():
    with pytest.raises(ValueError):
        NumerationSystem(kind=NumerationKind.FIBONACCI, base=3)
