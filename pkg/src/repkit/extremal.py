"""Extremes of the normalized count R(A, n) / n.

Most n have R2(A0, n) near n/8, but the ratio does not converge: the
all-ones targets n = 2^(2l+1) - 1 force every representation to split
its digits between y and z with odd total popcount, so R2(A0, n) = 0
along that whole subsequence.  ``allones_zero_check`` verifies the
zeros directly; ``extremal_scan`` sweeps windows of [1, x] for the
smallest and largest ratio, which surfaces such subsequences for any
input set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import KIND_R2, KIND_R3, KINDS
from .engine import (
    DEFAULT_MAX_ELEMENTS,
    SetPrefix,
    r2,
    r2_range,
    r3_range,
    thue_morse_prefix,
)
from .partitions import VerificationReport


@dataclass(frozen=True)
class ExtremeRecord:
    """Window extreme of R(A, n) / n; kind is "min" or "max"."""

    n: int
    ratio: float
    kind: str
    counter_kind: str
    window_lo: int
    window_hi: int


def allones_zero_check(
    l_max: int, prefix: SetPrefix | None = None
) -> VerificationReport:
    """r2(A0, 2^(2l+1) - 1) = 0 for every l in [0, l_max].

    Builds the Thue-Morse prefix itself when none is supplied.
    Failure tuples are (n, count, 0).
    """
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")
    top = (1 << (2 * l_max + 1)) - 1
    if prefix is None:
        prefix = thue_morse_prefix(top)
    elif prefix.bound < top:
        raise ValueError(f"prefix bound {prefix.bound} below largest target {top}")
    failures = []
    for l in range(l_max + 1):
        n = (1 << (2 * l + 1)) - 1
        count = r2(prefix, n)
        if count != 0:
            failures.append((n, count, 0))
    return VerificationReport.build((0, l_max), failures)


def extremal_scan(
    a: SetPrefix,
    x: int,
    window_size: int,
    kind: str = KIND_R2,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> list[ExtremeRecord]:
    """Min and max of R(A, n) / n on each window (lo, lo + window_size].

    Windows tile [1, x]; ties break to the smallest n.  Deterministic:
    same inputs give bit-identical records.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if window_size < 1:
        raise ValueError("window_size must be at least 1")
    if x < 1:
        raise ValueError("x must be positive")
    rng = r2_range if kind == KIND_R2 else r3_range
    counts = rng(a, x, max_elements=max_elements)
    records = []
    lo = 0
    while lo < x:
        hi = min(lo + window_size, x)
        ns = np.arange(lo + 1, hi + 1, dtype=np.float64)
        ratios = counts[lo + 1 : hi + 1].astype(np.float64) / ns
        imin = int(np.argmin(ratios))
        imax = int(np.argmax(ratios))
        records.append(
            ExtremeRecord(lo + 1 + imin, float(ratios[imin]), "min", kind, lo, hi)
        )
        records.append(
            ExtremeRecord(lo + 1 + imax, float(ratios[imax]), "max", kind, lo, hi)
        )
        lo = hi
    return records
