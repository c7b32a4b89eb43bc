import pytest
from hypothesis import given, strategies as st

from randwalls.words import (
    canonical_rotation,
    inverse,
    is_cyclically_reduced,
    is_reduced,
    rotations,
    string_to_word,
    word_to_string,
)

letters = st.integers(min_value=-3, max_value=3).filter(lambda g: g != 0)
words = st.lists(letters, min_size=1, max_size=12).map(tuple)


def test_inverse_involution():
    w = (1, 2, -1, 3)
    assert inverse(w) == (-3, 1, -2, -1)
    assert inverse(inverse(w)) == w


def test_reduced_predicates():
    assert is_reduced((1, 2, -1))
    assert not is_reduced((1, -1, 2))
    assert is_cyclically_reduced((1, 2, 3))
    assert not is_cyclically_reduced((1, 2, -1))  # reduces around the cycle
    assert not is_cyclically_reduced((1, -1))


def test_string_round_trip():
    assert word_to_string((1, -2, 3)) == "aBc"
    assert string_to_word("aBc") == (1, -2, 3)
    with pytest.raises(ValueError):
        string_to_word("a1")


@given(words)
def test_string_round_trip_random(w):
    assert string_to_word(word_to_string(w)) == w


@given(words)
def test_canonical_rotation_invariant(w):
    canon = canonical_rotation(w)
    assert canon in list(rotations(w))
    for r in rotations(w):
        assert canonical_rotation(r) == canon
