from fractions import Fraction

import pytest

from app.core.attractor import is_attractor
from app.core.errors import LengthOutOfRangeError, PositionOutOfRangeError
from app.core.greedy import (
    SuffixAutomaton,
    first_violation,
    greedy_attractor,
    greedy_for_word,
    greedy_run,
    is_novel,
    minimal_novel_at,
)
from app.core.recurrence import appearance_profile, windowed
from app.core.sequences import builtin_spec, prefix
from app.models.base import Word

SEQUENCES = ["tm", "pd", "vtm", "trib", "pow2"]


def test_thue_morse_prefix_of_four():
    assert greedy_attractor(builtin_spec("tm"), 4).positions == (0, 1, 3)


def test_novelty():
    w = Word.from_digits("0110")
    assert is_novel(w, 0, 1)
    assert not is_novel(w, 2, 1)
    assert is_novel(w, 2, 2)
    assert minimal_novel_at(w, 3) == 2
    assert minimal_novel_at(Word.from_digits("00"), 1) is None
    assert minimal_novel_at(Word.from_digits("01"), 0) == 1
    assert minimal_novel_at(Word.from_string("abab"), 3) is None
    assert is_novel(Word.from_string("abab"), 1, 2)
    assert minimal_novel_at(Word.from_string("abab"), 1) == 1
    with pytest.raises(LengthOutOfRangeError):
        is_novel(w, 2, 3)
    with pytest.raises(PositionOutOfRangeError):
        minimal_novel_at(w, 4)


def test_suffix_automaton_reports_longest_repeated_suffix():
    text = "abaababa"
    automaton = SuffixAutomaton()
    seen = automaton.extend_all(Word.from_string(text).symbols)
    for j, length in enumerate(seen):
        expected = max(ell for ell in range(j + 1) if ell == 0 or text[j - ell + 1 : j + 1] in text[:j])
        assert length == expected


@pytest.mark.parametrize("name", SEQUENCES)
def test_greedy_sets_verify(name):
    spec = builtin_spec(name)
    for n in range(1, 160):
        greedy_attractor(spec, n)


@pytest.mark.parametrize("name", SEQUENCES)
def test_every_step_adds_a_forced_position(name):
    spec = builtin_spec(name)
    n = 512
    w = prefix(spec, n)
    state = greedy_run(spec, n)
    assert state.positions == [step.index for step in state.history]
    assert state.frontier == n
    for step in state.history:
        start, length = step.violating.start, step.violating.length
        assert step.violating.end == step.index
        assert is_novel(w, start, length)
        if length > 1:
            assert not is_novel(w, start + 1, length - 1)
            assert not is_novel(w, start, length - 1)
        assert minimal_novel_at(prefix(spec, step.index + 1), step.index) == length
        previous = -1 if step.previous is None else step.previous
        assert length <= step.index - previous


def test_greedy_over_a_stream_is_prefix_closed():
    spec = builtin_spec("pd")
    long = greedy_run(spec, 300).positions
    assert greedy_run(spec, 100).positions == [p for p in long if p < 100]
    assert greedy_for_word(prefix(spec, 300)).positions == long


def test_first_violation():
    spec = builtin_spec("tm")
    assert first_violation(spec, [0, 1, 3], 3, 40) == 6
    assert first_violation(spec, [0, 1, 3], 4, 3) is None
    assert is_attractor(prefix(spec, 6), [0, 1, 3]).ok
    assert not is_attractor(prefix(spec, 7), [0, 1, 3]).ok


@pytest.mark.slow
@pytest.mark.parametrize("name", SEQUENCES)
def test_greedy_sets_verify_up_to_4096(name):
    spec = builtin_spec(name)
    for n in range(1, 4097):
        greedy_attractor(spec, n)


@pytest.mark.parametrize("name", SEQUENCES)
def test_greedy_positions_grow_geometrically(name):
    spec = builtin_spec(name)
    A = appearance_profile(windowed(spec, 8192), check_stability=False).estimate
    assert A is not None
    ratio = 1 + 1 / (A * Fraction(105, 100))
    positions = greedy_run(spec, 4096).positions
    for i, j in zip(positions, positions[1:]):
        if i >= 16:
            assert j >= ratio * i, (i, j)
