"""Construction and verification of equal-representation partitions.

A partition of the nonnegative integers into A and its complement has
R2(A, n) = R2(complement, n) for all n >= 2N - 1 exactly when the
initial segment [0, 2N-1] holds N members and membership follows the
doubling recurrence

    r2 variant:  2m in A <=> m in A,      2m+1 in A <=> m not in A
    r3 variant:  2m in A <=> m not in A,  2m+1 in A <=> m in A

for every m >= N (the r3 variant characterizes R3 equality instead).
This module generates such sets from an initial segment, checks both
directions of the characterization on finite windows, and verifies two
consequences of the structure: the dilation membership rule
m -> 2^i*m + k, and the block decomposition in which every aligned
length-2^k window of A high enough up is a copy of the Thue-Morse
prefix or its complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .engine import SetPrefix, r2_range, r3_range, thue_morse_prefix
from .sequences import evil_mask

VARIANT_R2 = "r2"
VARIANT_R3 = "r3"
VARIANTS = (VARIANT_R2, VARIANT_R3)

PRESETS = ("thue-morse", "chen-wang")


@dataclass(frozen=True)
class PartitionSpec:
    """Variant, threshold N, and initial membership bitmap on [0, 2N-1]."""

    variant: str
    N: int
    initial: int

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.initial < 0 or self.initial >> (2 * self.N):
            raise ValueError("initial bitmap has bits beyond [0, 2N-1]")
        if self.initial.bit_count() != self.N:
            raise ValueError(
                f"initial segment must hold exactly N={self.N} members, "
                f"got {self.initial.bit_count()}"
            )


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of an exhaustive finite check.

    ``failures`` holds one tuple per violation; its shape depends on the
    check (documented at each call site).  ``k0`` is only set by the
    block-structure check.
    """

    checked_range: tuple[int, int]
    failures: tuple
    passed: bool
    k0: int | None = None

    @classmethod
    def build(cls, checked_range, failures, k0=None) -> "VerificationReport":
        failures = tuple(failures)
        return cls(tuple(checked_range), failures, not failures, k0)


def balanced_initials(N: int) -> list[int]:
    """All bitmaps on [0, 2N-1] with exactly N members, ascending."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    bitmaps = [
        sum(1 << p for p in combo)
        for combo in itertools.combinations(range(2 * N), N)
    ]
    return sorted(bitmaps)


def preset_initial(name: str, N: int = 1) -> PartitionSpec:
    """Named starting partitions.

    "thue-morse" takes the even-popcount members of [0, 2N-1] under the
    r2 variant (N=1 reproduces A0); "chen-wang" takes the r3-variant
    set grown from {0}, restricted to [0, 2N-1].
    """
    if name == "thue-morse":
        mask = evil_mask(2 * N - 1)
        bitmap = int.from_bytes(
            np.packbits(mask, bitorder="little").tobytes(), "little"
        )
        return PartitionSpec(VARIANT_R2, N, bitmap)
    if name == "chen-wang":
        base = extend_partition(PartitionSpec(VARIANT_R3, 1, 1), max(2 * N - 1, 1))
        bitmap = base.bits & ((1 << (2 * N)) - 1)
        return PartitionSpec(VARIANT_R3, N, bitmap)
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")


def extend_partition(spec: PartitionSpec, x: int) -> SetPrefix:
    """Grow the initial segment to [0, x] by the variant's recurrence."""
    if x < 2 * spec.N - 1:
        raise ValueError(f"x={x} cannot hold the initial segment [0, {2 * spec.N - 1}]")
    mem = np.zeros(x + 1, dtype=np.uint8)
    for m in range(2 * spec.N):
        mem[m] = (spec.initial >> m) & 1
    flip_even = spec.variant == VARIANT_R3
    filled = 2 * spec.N - 1
    while filled < x:
        m_lo = (filled + 1) // 2
        m_hi = min(filled, x // 2)
        src = mem[m_lo : m_hi + 1]
        even = src ^ 1 if flip_even else src
        odd = src if flip_even else src ^ 1
        mem[2 * m_lo : 2 * m_hi + 1 : 2] = even
        hi_odd = 2 * m_hi + 1
        if hi_odd > x:
            odd = odd[:-1]
            hi_odd -= 2
        if odd.size:
            mem[2 * m_lo + 1 : hi_odd + 1 : 2] = odd
        filled = min(2 * m_hi + 1, x)
    return SetPrefix.from_bool_array(mem.astype(bool))


def check_digit_rules(a: SetPrefix, N: int, x: int, variant: str) -> bool:
    """Initial weight plus the doubling recurrence on a finite window.

    True iff |A on [0, 2N-1]| = N and the variant recurrence holds for
    every m with N <= m and 2m+1 <= x.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if x > a.bound:
        raise ValueError(f"window {x} exceeds prefix bound {a.bound}")
    if x < 2 * N - 1:
        raise ValueError("window too small to see the initial segment")
    initial = a.bits & ((1 << (2 * N)) - 1)
    if initial.bit_count() != N:
        return False
    m_hi = (x - 1) // 2
    if m_hi < N:
        return True
    mem = a.to_bool_array()
    src = mem[N : m_hi + 1]
    even = mem[2 * N : 2 * m_hi + 1 : 2]
    odd = mem[2 * N + 1 : 2 * m_hi + 2 : 2]
    if variant == VARIANT_R2:
        return bool(np.all(even == src) and np.all(odd == ~src))
    return bool(np.all(even == ~src) and np.all(odd == src))


def verify_equality(a: SetPrefix, N: int, x: int, variant: str) -> VerificationReport:
    """Representation-function equality of A and its complement.

    Compares r2 (variant "r2") or r3 (variant "r3") of A and of the
    complement at every n with 2N-1 <= n <= x.  Failure tuples are
    (n, count_A, count_complement).
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if x > a.bound:
        raise ValueError(f"window {x} exceeds prefix bound {a.bound}")
    lo = 2 * N - 1
    if lo > x:
        raise ValueError(f"window [{lo}, {x}] is empty")
    rng = r2_range if variant == VARIANT_R2 else r3_range
    left = rng(a, x)
    right = rng(a.complement(), x)
    bad = np.nonzero(left[lo:] != right[lo:])[0]
    failures = [(int(n) + lo, int(left[n + lo]), int(right[n + lo])) for n in bad]
    return VerificationReport.build((lo, x), failures)


def dilation_check(
    a: SetPrefix, N: int, m_max: int, i_max: int
) -> VerificationReport:
    """Membership under the dilation m -> 2^i*m + k.

    For an r2-variant partition, membership of 2^i*m + k (with m >= N,
    0 <= k < 2^i) agrees with membership of m when k has even popcount
    and is opposite when odd.  Checks the full grid m in [N, m_max],
    i in [0, i_max]; failure tuples are (m, i, k).
    """
    need = (m_max << i_max) + (1 << i_max) - 1
    if need > a.bound:
        raise ValueError(f"grid needs prefix bound {need}, have {a.bound}")
    if m_max < N:
        raise ValueError("m_max must be at least N")
    mem = a.to_bool_array()
    ms = np.arange(N, m_max + 1)
    base = mem[ms]
    failures = []
    for i in range(i_max + 1):
        ks = np.arange(1 << i, dtype=np.uint64)
        k_even = evil_mask((1 << i) - 1)
        targets = (ms[:, None] << i) + ks[None, :].astype(np.int64)
        expected = np.where(k_even[None, :], base[:, None], ~base[:, None])
        bad_m, bad_k = np.nonzero(mem[targets] != expected)
        failures.extend(
            (int(ms[mi]), i, int(ks[ki])) for mi, ki in zip(bad_m, bad_k)
        )
    return VerificationReport.build((N, m_max), failures)


def block_start_exponent(N: int) -> int:
    """The unique k0 with 2^(k0-2) < N <= 2^(k0-1)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    return (N - 1).bit_length() + 1


def block_structure_check(
    a: SetPrefix, spec: PartitionSpec, k: int
) -> VerificationReport:
    """Aligned windows of A high enough up copy the Thue-Morse prefix.

    For an r2-variant partition and block length 2^k, every window
    A on [j*2^k, (j+1)*2^k) with j >= 2^k0 equals the Thue-Morse prefix
    on [0, 2^k - 1] shifted up when j is a member, and its complement
    otherwise.  Failure tuples are (j, j_in_A, mismatches).
    """
    if spec.variant != VARIANT_R2:
        raise ValueError("block structure is defined for the r2 variant")
    if k < 1:
        raise ValueError("k must be a positive integer")
    k0 = block_start_exponent(spec.N)
    width = 1 << k
    j_lo = 1 << k0
    j_hi = a.bound // width - 1
    if a.bound < (j_lo + 1) * width:
        raise ValueError(
            f"prefix bound {a.bound} too small for one full block at j={j_lo}"
        )
    mem = a.to_bool_array()
    tm_block = evil_mask(width - 1)
    failures = []
    for j in range(j_lo, j_hi + 1):
        window = mem[j * width : (j + 1) * width]
        expected = tm_block if mem[j] else ~tm_block
        mismatches = int(np.count_nonzero(window != expected))
        if mismatches:
            failures.append((j, bool(mem[j]), mismatches))
    return VerificationReport.build((j_lo, j_hi), failures, k0=k0)
