"""Exact representation-function counting over set prefixes.

A SetPrefix is an immutable membership bitmap of A restricted to [0, x].
Three counters are provided, all exact integer arithmetic:

    r2(A, n)       pairs a + a' = n with a < a', both in A
    r3(A, n)       pairs a + a' = n with a <= a'
    r_cross(A, B, n)   ordered pairs a + b = n, a in A, b in B

Point queries intersect the bitmap with its reversal about n and
popcount the overlap -- word-parallel AND on Python integers, O(n/w)
per query.

Range queries need every count up to x at once.  The default backend
embeds the bitmap into a carry-free base-2^32 integer (one 32-bit digit
per element, counts never reach 2^32 at supported sizes) and multiplies
with GMP; the digits of the product are exactly the ordered-pair counts
for every target simultaneously.  A "bitops" backend that walks targets
one by one with the shifted-AND trick is kept for cross-validation.
No floating-point transform is involved anywhere, so counts are exact
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import gmpy2
import numpy as np

from .sequences import evil_mask

# Range outputs allocate x+1 32-bit counters plus the packed operands;
# anything above this needs an explicit override.
DEFAULT_MAX_ELEMENTS = 1 << 26


class ResourceLimitError(RuntimeError):
    """Requested range exceeds the configured memory ceiling."""


_BYTE_REVERSE = np.packbits(
    np.unpackbits(np.arange(256, dtype=np.uint8)[:, None], axis=1, bitorder="little"),
    axis=1,
).ravel()


def _reverse_bits(value: int, nbits: int) -> int:
    """Reverse the low nbits of value (bit i maps to bit nbits-1-i)."""
    nbytes = (nbits + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
    flipped = _BYTE_REVERSE[raw][::-1]
    return int.from_bytes(flipped.tobytes(), "little") >> (8 * nbytes - nbits)


@dataclass(frozen=True)
class SetPrefix:
    """Immutable membership bitmap of a set A restricted to [0, bound].

    ``bits`` has bit m set iff m is a member; no bits above ``bound``.
    """

    bits: int
    bound: int

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        if self.bits < 0 or self.bits >> (self.bound + 1):
            raise ValueError("membership bitmap has bits beyond the bound")

    @classmethod
    def from_members(cls, members, bound: int) -> "SetPrefix":
        bits = 0
        for m in members:
            if m < 0 or m > bound:
                raise ValueError(f"member {m} outside [0, {bound}]")
            bits |= 1 << m
        return cls(bits, bound)

    @classmethod
    def from_bool_array(cls, mask: np.ndarray) -> "SetPrefix":
        arr = np.asarray(mask, dtype=bool)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("membership array must be 1-D and nonempty")
        packed = np.packbits(arr, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"), arr.size - 1)

    @cached_property
    def _reversed_bits(self) -> int:
        # bit m of the reversal = membership of bound - m
        return _reverse_bits(self.bits, self.bound + 1)

    def __contains__(self, m: int) -> bool:
        return 0 <= m <= self.bound and (self.bits >> m) & 1 == 1

    def members(self) -> list[int]:
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def to_bool_array(self) -> np.ndarray:
        nbytes = (self.bound + 8) // 8
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.bound + 1].astype(bool)

    def complement(self) -> "SetPrefix":
        mask = (1 << (self.bound + 1)) - 1
        return SetPrefix(self.bits ^ mask, self.bound)

    def count(self) -> int:
        return self.bits.bit_count()


def complement_prefix(a: SetPrefix) -> SetPrefix:
    """Prefix of the complement set on the same bound."""
    return a.complement()


def thue_morse_prefix(x: int) -> SetPrefix:
    """Prefix of the Thue-Morse set A0 on [0, x]."""
    return SetPrefix.from_bool_array(evil_mask(x))


def _check_target(n: int, bound: int) -> None:
    if n < 0:
        raise ValueError("target n must be nonnegative")
    if n > bound:
        raise ValueError(
            f"target {n} exceeds prefix bound {bound}; counts would be truncated"
        )


def r_cross(a: SetPrefix, b: SetPrefix, n: int) -> int:
    """Ordered pairs p + q = n with p in A, q in B."""
    _check_target(n, min(a.bound, b.bound))
    mask = (1 << (n + 1)) - 1
    rev = b._reversed_bits >> (b.bound - n)
    return ((a.bits & mask) & rev).bit_count()


def _diag(a: SetPrefix, n: int) -> int:
    return 1 if n % 2 == 0 and (n // 2) in a else 0


def r2(a: SetPrefix, n: int) -> int:
    """Pairs p + q = n, p < q, both in A."""
    return (r_cross(a, a, n) - _diag(a, n)) // 2


def r3(a: SetPrefix, n: int) -> int:
    """Pairs p + q = n, p <= q, both in A."""
    return r2(a, n) + _diag(a, n)


def _check_range(x: int, bound: int, max_elements: int) -> None:
    _check_target(x, bound)
    if x + 1 > max_elements:
        raise ResourceLimitError(
            f"range of {x + 1} elements exceeds the ceiling of {max_elements}; "
            "raise max_elements to override"
        )


def _pack_strided(bits: int, x: int) -> gmpy2.mpz:
    # one base-2^32 digit per element; bit m of the bitmap becomes digit m
    nbytes = (x + 8) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    mem = np.unpackbits(raw, bitorder="little")[: x + 1]
    return gmpy2.mpz(int.from_bytes(mem.astype("<u4").tobytes(), "little"))


def _unpack_digits(product: gmpy2.mpz, count: int) -> np.ndarray:
    as_int = int(product)
    nbytes = max(4 * count, (as_int.bit_length() + 7) // 8)
    nbytes += -nbytes % 4  # whole uint32 words
    raw = as_int.to_bytes(nbytes, "little")
    return np.frombuffer(raw, dtype="<u4")[:count].copy()


def r_cross_range(
    a: SetPrefix,
    b: SetPrefix,
    x: int | None = None,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> np.ndarray:
    """r_cross(A, B, n) for every n in [0, x] as a uint32 array.

    Both prefixes are truncated to [0, x] before the product; every pair
    contributing to a target n <= x lies in that window, so the counts
    are exact.
    """
    if x is None:
        x = min(a.bound, b.bound)
    _check_range(x, min(a.bound, b.bound), max_elements)
    low = (1 << (x + 1)) - 1
    pa = _pack_strided(a.bits & low, x)
    pb = pa if (b.bits & low) == (a.bits & low) else _pack_strided(b.bits & low, x)
    return _unpack_digits(pa * pb, x + 1)


def _diag_range(a: SetPrefix, x: int) -> np.ndarray:
    mem = a.to_bool_array()
    diag = np.zeros(x + 1, dtype=np.uint32)
    diag[0::2] = mem[: x // 2 + 1]
    return diag


def r2_range(
    a: SetPrefix,
    x: int | None = None,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    backend: str = "gmp",
) -> np.ndarray:
    """r2(A, n) for every n in [0, x] as a uint32 array.

    backend "gmp" computes the whole self-convolution in one exact GMP
    multiplication; "bitops" walks targets individually with the
    shifted-AND popcount trick (slower, used for cross-validation).
    """
    if x is None:
        x = a.bound
    if backend == "gmp":
        cross = r_cross_range(a, a, x, max_elements=max_elements)
    elif backend == "bitops":
        _check_range(x, a.bound, max_elements)
        cross = _cross_range_bitops(a, x)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return (cross - _diag_range(a, x)) >> 1


def r3_range(
    a: SetPrefix,
    x: int | None = None,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    backend: str = "gmp",
) -> np.ndarray:
    """r3(A, n) for every n in [0, x] as a uint32 array."""
    if x is None:
        x = a.bound
    out = r2_range(a, x, max_elements=max_elements, backend=backend)
    return out + _diag_range(a, x)


def _cross_range_bitops(a: SetPrefix, x: int) -> np.ndarray:
    low = (1 << (x + 1)) - 1
    bits = a.bits & low
    rev = _reverse_bits(bits, x + 1)  # bit m = membership of x - m
    out = np.empty(x + 1, dtype=np.uint32)
    for n in range(x + 1):
        mask = (1 << (n + 1)) - 1
        out[n] = ((bits & mask) & (rev >> (x - n))).bit_count()
    return out
