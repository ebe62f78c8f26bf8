import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repkit.sequences import (
    DigitVector,
    digit_block,
    digits,
    evil_mask,
    popcount,
    popcount_parity,
    thue_morse_member,
)

from oracles import tm_member_brute


def test_popcount_examples():
    assert popcount(0) == 0
    assert popcount(3) == 2
    assert popcount(45) == 4


def test_popcount_rejects_negative():
    with pytest.raises(ValueError):
        popcount(-1)


def test_thue_morse_examples():
    assert thue_morse_member(0) is True
    assert thue_morse_member(7) is False
    assert thue_morse_member(10) is True


def test_digits_examples():
    assert digits(0).bits == ()
    assert digits(5).bits == (1, 0, 1)
    assert digits(12).bits == (0, 0, 1, 1)


def test_digits_reads_zero_beyond_length():
    d = digits(5)
    assert d.digit(0) == 1
    assert d.digit(7) == 0


@given(st.integers(min_value=0, max_value=1 << 62))
def test_digits_round_trip(n):
    d = digits(n)
    assert d.value == n
    assert sum(b << i for i, b in enumerate(d.bits)) == n


def test_digit_vector_validates():
    with pytest.raises(ValueError):
        DigitVector((1, 1), 2)
    with pytest.raises(ValueError):
        DigitVector((2,), 2)


def test_digit_block_examples():
    assert digit_block(5, 0) == (1, 0, 1)
    assert digit_block(45, 1) == (1, 0, 1)
    assert digit_block(5, 7) == (0, 0, 0)


@given(st.integers(min_value=0, max_value=1 << 62), st.integers(min_value=0, max_value=25))
def test_digit_block_matches_digits(n, t):
    d = digits(n)
    assert digit_block(n, t) == (d.digit(3 * t), d.digit(3 * t + 1), d.digit(3 * t + 2))


def test_thue_morse_recurrence_full_sweep():
    # membership doubles: 2n copies n, 2n+1 flips it
    mask = evil_mask((1 << 21) - 1)
    half = mask[: 1 << 20]
    assert np.array_equal(mask[0::2], half)
    assert np.array_equal(mask[1::2], ~half)


def test_evil_mask_matches_pointwise():
    mask = evil_mask(512)
    for n in range(513):
        assert bool(mask[n]) == thue_morse_member(n) == tm_member_brute(n)


@given(st.integers(min_value=0, max_value=1 << 62))
@settings(max_examples=200)
def test_popcount_parity_matches_bit_count(n):
    assert int(popcount_parity(np.array([n], dtype=np.uint64))[0]) == popcount(n) % 2
