"""Binary-digit primitives and Thue-Morse membership.

Everything downstream is built on two complementary sets:

    A0 = nonnegative integers with an even number of ones in their
         binary expansion (the Thue-Morse set, "evil" numbers),
    B0 = the complement of A0 ("odious" numbers).

Membership is a popcount-parity query.  Digit blocks are the aligned
triples (eps_{3t}, eps_{3t+1}, eps_{3t+2}) of an integer's little-endian
binary expansion; the digit-analysis layer scans them for the marked
pattern (1,0,1).

All point operations are pure functions on Python integers; range scans
get a vectorized parity bitmap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def popcount(n: int) -> int:
    """Number of ones in the binary expansion of n (n >= 0)."""
    if n < 0:
        raise ValueError(f"popcount is defined for nonnegative integers, got {n}")
    return n.bit_count()


def thue_morse_member(n: int) -> bool:
    """True iff n is in A0, i.e. popcount(n) is even."""
    if n < 0:
        raise ValueError(f"membership is defined for nonnegative integers, got {n}")
    return n.bit_count() % 2 == 0


@dataclass(frozen=True)
class DigitVector:
    """Little-endian binary expansion of a nonnegative integer.

    ``bits[i]`` is the coefficient of 2^i; indices at or beyond
    ``len(bits)`` read as zero.
    """

    bits: tuple[int, ...]
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("DigitVector value must be nonnegative")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("DigitVector bits must be 0 or 1")
        if sum(b << i for i, b in enumerate(self.bits)) != self.value:
            raise ValueError("DigitVector bits do not reconstruct value")

    def digit(self, i: int) -> int:
        if i < 0:
            raise ValueError("digit index must be nonnegative")
        return self.bits[i] if i < len(self.bits) else 0

    def __len__(self) -> int:
        return len(self.bits)


def digits(n: int) -> DigitVector:
    """DigitVector of n; digits(0) is the empty (all-zero) vector."""
    if n < 0:
        raise ValueError(f"digits is defined for nonnegative integers, got {n}")
    return DigitVector(tuple((n >> i) & 1 for i in range(n.bit_length())), n)


def digit_block(n: int, t: int) -> tuple[int, int, int]:
    """The t-th aligned digit triple (eps_{3t}, eps_{3t+1}, eps_{3t+2}) of n.

    Blocks beyond the bit length are (0, 0, 0).
    """
    if n < 0 or t < 0:
        raise ValueError("digit_block arguments must be nonnegative")
    chunk = (n >> (3 * t)) & 7
    return (chunk & 1, (chunk >> 1) & 1, (chunk >> 2) & 1)


def popcount_parity(values: np.ndarray) -> np.ndarray:
    """Vectorized popcount mod 2 via xor-folding (uint64 inputs)."""
    v = np.asarray(values, dtype=np.uint64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return v & np.uint64(1)


def evil_mask(bound: int) -> np.ndarray:
    """Boolean membership array of A0 on [0, bound] (index m = m in A0)."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return popcount_parity(np.arange(bound + 1, dtype=np.uint64)) == 0
