import itertools
from fractions import Fraction

import pytest

from app.core.attractor import (
    constraints,
    delta,
    factor_count,
    factor_counts,
    is_attractor,
    is_attractor_for_lengths,
)
from app.core.errors import LengthOutOfRangeError, PositionOutOfRangeError
from app.core.sequences import builtin_spec, prefix
from app.core.suffix_index import SuffixIndex, lcp_array, suffix_array
from app.models.base import LengthRange, Word


def naive_first_uncovered(text, positions, lengths=None):
    n = len(text)
    for length in range(1, n + 1):
        if lengths is not None and length not in lengths:
            continue
        seen = set()
        for start in range(n - length + 1):
            factor = text[start : start + length]
            if factor in seen:
                continue
            seen.add(factor)
            covered = False
            at = text.find(factor)
            while at != -1:
                if any(at <= p < at + length for p in positions):
                    covered = True
                    break
                at = text.find(factor, at + 1)
            if not covered:
                return start, length
    return None


def test_suffix_and_lcp_arrays():
    symbols = Word.from_string("banana").symbols
    sa = suffix_array(symbols)
    assert sa.tolist() == [5, 3, 1, 0, 4, 2]
    assert lcp_array(symbols, sa).tolist() == [0, 1, 3, 0, 0, 2]


def test_factor_groups_list_every_occurrence():
    index = SuffixIndex(Word.from_string("banana").symbols)
    groups, starts = index.factor_groups(2)
    by_group = {}
    for group, start in zip(groups.tolist(), starts.tolist()):
        by_group.setdefault(group, []).append(start)
    assert sorted(by_group.values()) == [[0], [1, 3], [2, 4]]


def test_factor_counts_match_definition():
    w = prefix(builtin_spec("tm"), 60)
    text = str(w)
    counts = factor_counts(w)
    for length in (1, 2, 5, 13, 60):
        assert counts[length - 1] == len({text[i : i + length] for i in range(60 - length + 1)})
    assert factor_count(w, 13) == 40
    with pytest.raises(LengthOutOfRangeError):
        factor_count(w, 61)


def test_delta_of_alfalfa():
    w = Word.from_string("alfalfa")
    assert delta(w) == Fraction(3)


def test_known_attractors():
    alfalfa = Word.from_string("alfalfa")
    assert is_attractor(alfalfa, [2, 3, 4]).ok
    assert is_attractor(prefix(builtin_spec("pd"), 26), [7, 15]).ok

    verdict = is_attractor(Word.from_string("ab"), [0])
    assert not verdict.ok
    assert (verdict.failing.start, verdict.failing.length) == (1, 1)


def test_positions_outside_the_word_are_rejected():
    with pytest.raises(PositionOutOfRangeError):
        is_attractor(Word.from_digits("0110"), [4])


def test_verifier_agrees_with_brute_force():
    words = ["0110100110", "0100101001001", "2102012101", "aabaabbaab", "0000"]
    for raw in words:
        w = Word.from_string(raw)
        text = "".join(chr(65 + s) for s in w.symbols)
        for size in (1, 2, 3):
            for positions in itertools.combinations(range(len(w)), size):
                verdict = is_attractor(w, positions)
                expected = naive_first_uncovered(text, positions)
                got = None if verdict.ok else (verdict.failing.start, verdict.failing.length)
                assert got == expected, (raw, positions)


def test_length_restricted_verifier_agrees_with_brute_force():
    w = prefix(builtin_spec("tm"), 24)
    text = str(w)
    lengths = LengthRange(intervals=((3, 5), (9, 9)))
    for positions in ([0], [3, 11], [5, 7, 11], [1, 7, 15, 23]):
        verdict = is_attractor_for_lengths(w, positions, lengths)
        expected = naive_first_uncovered(text, positions, set(lengths.lengths()))
        got = None if verdict.ok else (verdict.failing.start, verdict.failing.length)
        assert got == expected


def test_constraints_characterise_attractors():
    w = prefix(builtin_spec("pd"), 12)
    masks = [c.covered for c in constraints(w)]
    for positions in itertools.combinations(range(12), 2):
        chosen = sum(1 << p for p in positions)
        assert all(mask & chosen for mask in masks) == is_attractor(w, positions).ok


def test_length_range_normalises():
    lengths = LengthRange(intervals=((5, 6), (1, 2), (3, 3)))
    assert lengths.intervals == ((1, 3), (5, 6))
    assert lengths.first_at_least(4) == 5
    assert lengths.clip(5).intervals == ((1, 3), (5, 5))
    assert str(lengths) == "1..3,5..6"


def binary_words(max_length):
    for length in range(1, max_length + 1):
        for symbols in itertools.product(range(2), repeat=length):
            yield Word(symbols=symbols, alphabet_size=2)


def min_hitting_set(masks, n):
    for size in range(n + 1):
        for positions in itertools.combinations(range(n), size):
            chosen = sum(1 << p for p in positions)
            if all(mask & chosen for mask in masks):
                return size
    return None


def test_node_occurrences_are_sorted_starts():
    index = SuffixIndex(Word.from_string("banana").symbols)
    found = sorted(index.node_occurrences(node).tolist() for node in range(index.node_count))
    assert [1, 3, 5] in found
    assert [0] in found
    for node in range(index.node_count):
        occurrences = index.node_occurrences(node).tolist()
        assert occurrences == sorted(occurrences)


def test_supersets_of_attractors_are_attractors():
    for raw in ["0110100110", "2102012101", "aabaabbaab"]:
        w = Word.from_string(raw)
        for positions in itertools.combinations(range(len(w)), 3):
            if not is_attractor(w, positions).ok:
                continue
            for extra in range(len(w)):
                assert is_attractor(w, set(positions) | {extra}).ok, (raw, positions, extra)


def test_reduced_constraints_keep_the_optimum():
    for w in binary_words(8):
        reduced = [c.covered for c in constraints(w)]
        full = [c.covered for c in constraints(w, minimal=False)]
        assert len(reduced) <= len(full)
        assert min_hitting_set(reduced, len(w)) == min_hitting_set(full, len(w)), w.symbols


@pytest.mark.slow
def test_reduced_constraints_keep_the_optimum_up_to_length_10():
    for w in binary_words(10):
        reduced = [c.covered for c in constraints(w)]
        full = [c.covered for c in constraints(w, minimal=False)]
        assert min_hitting_set(reduced, len(w)) == min_hitting_set(full, len(w)), w.symbols
