import math
from fractions import Fraction

import pytest

from app.core.attractor import is_attractor, is_attractor_for_lengths
from app.core.errors import AttractorError, WindowTooSmallError
from app.core.recurrence import (
    appearance_profile,
    chain_count,
    classify_growth,
    disjoint_witnesses,
    dyadic_attractor,
    least_appearance,
    least_recurrence,
    level_points,
    level_size,
    nonrecurrent_positions,
    recurrence_profile,
    recurrent_attractor,
    recurrent_construction,
    stride_attractor,
    stride_points,
    windowed,
)
from app.core.sequences import builtin_spec, parse_sequence_spec, prefix
from app.models.base import GrowthClass, LengthRange

UNARY = "morphism:0->00;seed=0"
RECURRENT = ["tm", "pd", "vtm", "trib"]


def constants(name, W=2048, max_length=None):
    ws = windowed(builtin_spec(name), W)
    return ws, appearance_profile(ws, max_length).estimate, recurrence_profile(ws, max_length).estimate


def test_thue_morse_least_appearance():
    ws = windowed(builtin_spec("tm"), 64)
    assert [least_appearance(ws, ell) for ell in range(1, 5)] == [2, 7, 8, 15]
    assert appearance_profile(ws, 4, check_stability=False).values == (2, 7, 8, 15)


def test_unary_word_has_unit_constants():
    ws = windowed(parse_sequence_spec(UNARY), 256)
    for ell in range(1, 17):
        assert least_appearance(ws, ell) == ell
        assert least_recurrence(ws, ell) == ell
    profile = appearance_profile(ws, 16)
    assert profile.estimate == Fraction(1)
    assert profile.stable
    assert recurrence_profile(ws, 16).estimate == Fraction(1)


def test_recurrence_dominates_appearance():
    ws = windowed(builtin_spec("tm"), 1024)
    for ell in range(1, 65):
        assert least_recurrence(ws, ell) >= least_appearance(ws, ell)


def test_powers_of_two_are_not_recurrent():
    ws = windowed(builtin_spec("pow2"), 1024)
    assert least_recurrence(ws, 1) is not None
    assert least_recurrence(ws, 2) is None
    profile = recurrence_profile(ws, 8)
    assert profile.estimate is None
    assert not profile.finite


@pytest.mark.parametrize("name", RECURRENT)
def test_recurrent_words_have_finite_constants(name):
    _, A, R = constants(name)
    assert A is not None and A >= 1
    assert R is not None and R >= A


def test_window_limits():
    ws = windowed(builtin_spec("tm"), 64)
    with pytest.raises(WindowTooSmallError):
        least_appearance(ws, 17)
    with pytest.raises(WindowTooSmallError):
        least_recurrence(ws, 9)
    with pytest.raises(WindowTooSmallError):
        appearance_profile(ws, 9)
    with pytest.raises(WindowTooSmallError):
        windowed(builtin_spec("tm"), 4)


def test_stride_and_level_points():
    assert stride_points(100, 3, Fraction(2)) == [2, 5, 8, 11]
    assert level_points(100, 2, Fraction(2)) == [1, 5, 9, 13, 17, 21]
    assert stride_points(3, 8, Fraction(1)) == [2]
    assert level_points(5, 8, Fraction(1)) == []
    assert level_points(100, 2, Fraction(2), offset=4) == [5, 9, 13, 17, 21, 25]
    squeezed = level_points(60, 16, Fraction(2))
    assert len(squeezed) == level_size(Fraction(2)) == 6
    assert squeezed[0] == 15 and squeezed[-1] == 43


def test_chain_count():
    assert chain_count(1) == 1
    assert chain_count(Fraction(3, 2)) == 3
    assert chain_count(10) == 7
    assert chain_count(10, c0=2) == 9
    assert chain_count(Fraction(211, 20)) == 7


@pytest.mark.parametrize("name", RECURRENT + ["pow2"])
def test_stride_attractors_cover_their_lengths(name):
    ws = windowed(builtin_spec(name), 1024)
    A = appearance_profile(ws, 64).estimate
    for n in (64, 200):
        w = prefix(builtin_spec(name), n)
        for s in (1, 2, 5, 16):
            result = stride_attractor(ws, n, s, A)
            assert is_attractor_for_lengths(w, result, LengthRange.between(s, 2 * s)).ok


def test_constructions_reject_small_constants():
    ws = windowed(builtin_spec("tm"), 64)
    with pytest.raises(AttractorError):
        stride_attractor(ws, 32, 1, Fraction(1, 2))
    with pytest.raises(AttractorError):
        stride_attractor(ws, 32, 0, 2)


def test_dyadic_attractor_of_the_unary_word():
    ws = windowed(parse_sequence_spec(UNARY), 64)
    assert dyadic_attractor(ws, 16, 1).positions == (0, 1, 2, 5, 6, 13, 14)


@pytest.mark.parametrize("name", RECURRENT + ["pow2"])
def test_dyadic_attractor_size_bound(name):
    ws = windowed(builtin_spec(name), 1024)
    A = appearance_profile(ws, 128).estimate
    for n in (50, 100, 128):
        result = dyadic_attractor(ws, n, A)
        assert is_attractor(prefix(builtin_spec(name), n), result).ok
        assert len(result) <= (2 * math.ceil(A) + 1) * math.ceil(math.log2(n + 2))


@pytest.mark.parametrize("name", RECURRENT)
def test_recurrent_construction_verifies(name):
    ws, A, R = constants(name)
    for n in (40, 100, 128):
        result = recurrent_construction(ws, n, A, R)
        assert result.verified
        assert result.kept_levels <= result.levels
        assert result.c0 >= 0
        assert is_attractor(prefix(builtin_spec(name), n), result.positions).ok
    assert recurrent_attractor(ws, 128, A, R).n == 128


def test_recurrent_construction_needs_a_finite_recurrence_constant():
    ws = windowed(builtin_spec("pow2"), 1024)
    with pytest.raises(AttractorError):
        recurrent_construction(ws, 256, 2, None)
    with pytest.raises(AttractorError):
        recurrent_construction(ws, 256, 2, 4, c0=-1)


def test_nonrecurrent_witnesses():
    pow2 = windowed(builtin_spec("pow2"), 1024)
    witnesses = nonrecurrent_positions(pow2)
    assert witnesses
    disjoint = disjoint_witnesses(witnesses)
    assert len(disjoint) >= 3
    for left, right in zip(disjoint, disjoint[1:]):
        assert left.end < right.start
    text = pow2.window.as_bytes()
    for witness in witnesses:
        factor = text[witness.start : witness.start + witness.length]
        assert text.count(factor) == 1
    assert nonrecurrent_positions(windowed(builtin_spec("tm"), 1024)) == []
    assert nonrecurrent_positions(windowed(parse_sequence_spec(UNARY), 1024)) == []


def test_classify_powers_of_two_as_logarithmic():
    evidence = classify_growth(builtin_spec("pow2"), [64, 128, 256, 512, 1024])
    assert evidence.classification == GrowthClass.LOGARITHMIC
    assert evidence.window == 4096
    assert evidence.disjoint_witnesses >= 3
    assert list(evidence.sizes) == sorted(evidence.sizes)


def test_classify_thue_morse_plateau_as_constant():
    evidence = classify_growth(builtin_spec("tm"), [17, 18, 20, 22, 24])
    assert evidence.classification == GrowthClass.CONSTANT
    assert evidence.sizes == (3, 3, 3, 3, 3)
    assert evidence.size_sources == ("exact",) * 5
    assert evidence.nonrecurrent == ()


def test_classify_needs_five_points():
    with pytest.raises(AttractorError):
        classify_growth(builtin_spec("tm"), [64, 128, 256, 512])


@pytest.mark.slow
def test_powers_of_two_classify_as_logarithmic_at_scale():
    evidence = classify_growth(builtin_spec("pow2"), [64, 128, 256, 512, 1024, 2048, 4096])
    assert evidence.classification == GrowthClass.LOGARITHMIC
    assert evidence.disjoint_witnesses >= 4


@pytest.mark.slow
@pytest.mark.parametrize("name", RECURRENT)
def test_recurrent_words_classify_as_constant(name):
    evidence = classify_growth(builtin_spec(name), [64, 128, 256, 512, 1024, 2048, 4096])
    assert evidence.nonrecurrent == ()
    assert evidence.classification == GrowthClass.CONSTANT
    assert evidence.disjoint_witnesses == 0
    assert len(set(evidence.sizes[2:])) == 1


@pytest.mark.parametrize("name", RECURRENT)
def test_recurrent_construction_size_is_flat(name):
    ws = windowed(builtin_spec(name), 8192)
    A = appearance_profile(ws, check_stability=False).estimate
    R = recurrence_profile(ws, check_stability=False).estimate
    sizes = set()
    for n in (256, 512, 1024, 2048):
        result = recurrent_construction(ws, n, A, R)
        assert result.verified
        assert result.bound_achieved
        assert result.kept_levels == min(chain_count(R, result.c0), result.levels)
        sizes.add(result.size)
    assert len(sizes) == 1
