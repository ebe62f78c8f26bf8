"""Digit-block analysis of representation pairs.

For a target n, every unordered representation n = y + z (0 <= y < z)
is examined through the binary digits of y and z.

Marked blocks.  An aligned digit triple of n equal to (1, 0, 1) is a
marked block; ``block_profile`` lists the block indices k_1 < k_2 < ...
holding them.  A candidate z "hits" a marked block when its own triple
there is (0, 0, 1) or (0, 1, 0), i.e. z takes exactly one of the two
ones of n's block without a carry.  The sieve keeps the pairs whose z
hits some marked block (first hit in ascending block order) and whose
remaining high bits are strictly dominated by z's; the others split
into "missed every block" and "hit but not dominated".

Toggle sites.  Independently of the marked blocks, a pair may expose a
site L where the digit window

    (y_{L+1}, y_{L+2}, z_L, z_{L+1}, z_{L+2})

equals (0,0,0,0,1) or (1,0,0,1,0), with no smaller site matching
either pattern.  If in addition the bits of y above L+2 are dominated
by those of z, the pair is toggleable: moving 2^(L+1) between y and z
(direction fixed by the pattern) produces another toggleable pair at
the same site with the opposite pattern.  The toggle is an involution
that changes the total digit sum by exactly one, so it pairs the
even-parity classes (AA, BB by Thue-Morse membership of y and z) with
the odd-parity classes (AB, BA) and forces

    |AA| + |BB| = |AB| + |BA|

exactly, for every n.  Sieved pairs are always toggleable, which is
what ties the sieve's near-complete count to the class balance and
ultimately concentrates R2 around n/8.

Deviation and density.  ``deviation`` measures |R(A, n) - n/8| scaled
by n^(1-theta); ``density_profile`` reports, per dyadic window, how
many n stay within C of that scale, plus the worst deviation grouped
by marked-block count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    DEFAULT_MAX_ELEMENTS,
    SetPrefix,
    r2,
    r2_range,
    r3,
    r3_range,
)
from .sequences import popcount_parity, thue_morse_member

KIND_R2 = "r2"
KIND_R3 = "r3"
KINDS = (KIND_R2, KIND_R3)

PATTERN_00001 = "00001"
PATTERN_10010 = "10010"

CLASSES = ("AA", "BB", "AB", "BA")


@dataclass(frozen=True)
class DigitProfile:
    """Marked (1,0,1) digit blocks of n: how many and where."""

    n: int
    count: int
    positions: tuple[int, ...]


@dataclass(frozen=True)
class RepPair:
    """One representation n = y + z with its digit classification.

    ``toggle_site`` is the least site matching a toggle pattern (None
    if no site matches); ``toggleable`` adds the high-bit domination
    condition.  ``parity_class`` is two letters, A/B for Thue-Morse
    membership of y then z.
    """

    y: int
    z: int
    toggle_site: int | None
    pattern: str | None
    toggleable: bool
    parity_class: str


@dataclass(frozen=True)
class SplitCounts:
    """Sieve decomposition of the ⌊(n+1)/2⌋ representations of n.

    total = missed + failed + kept, exactly: every pair either misses
    all marked blocks, hits one first but fails domination, or is kept.
    """

    total: int
    missed: int
    failed: int
    kept: int


@dataclass(frozen=True)
class PairClassification:
    """Toggleable pairs of n, counted by parity class."""

    n: int
    aa: int
    bb: int
    ab: int
    ba: int
    members: tuple[RepPair, ...]

    @property
    def size(self) -> int:
        return self.aa + self.bb + self.ab + self.ba


@dataclass(frozen=True)
class ToggleAudit:
    """Exhaustive involution check over the toggleable pairs of n."""

    n: int
    size: int
    aa: int
    bb: int
    ab: int
    ba: int
    closed: bool
    site_preserved: bool
    pattern_flipped: bool
    involution: bool
    parity_flipped: bool
    balanced: bool

    @property
    def passed(self) -> bool:
        return (
            self.closed
            and self.site_preserved
            and self.pattern_flipped
            and self.involution
            and self.parity_flipped
            and self.balanced
        )


@dataclass(frozen=True)
class SieveAudit:
    """Sieve counts plus the containment and counting identities."""

    n: int
    counts: SplitCounts
    subset_of_toggleable: bool
    identity_ok: bool


@dataclass(frozen=True)
class FDeviation:
    """Worst scaled deviation among n with a given marked-block count."""

    f: int
    count: int
    max_deviation: float


@dataclass(frozen=True)
class WindowStat:
    """Good-n statistics on the dyadic window (lo, hi]."""

    lo: int
    hi: int
    total: int
    good: int
    fraction: float | None


@dataclass(frozen=True)
class DensityReport:
    theta: float
    C: float
    counter_kind: str
    windows: tuple[WindowStat, ...]
    per_f_max_deviation: tuple[FDeviation, ...]


def block_profile(n: int) -> DigitProfile:
    """Count and locate the marked (1,0,1) digit blocks of n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    positions = tuple(
        t for t in range((n.bit_length() + 2) // 3) if (n >> (3 * t)) & 7 == 5
    )
    return DigitProfile(n, len(positions), positions)


def block_hit(z: int, t: int) -> bool:
    """True iff the digit triple of z at block t is (0,0,1) or (0,1,0)."""
    if z < 0 or t < 0:
        raise ValueError("arguments must be nonnegative")
    return (z >> (3 * t)) & 7 in (4, 2)


def high_bits_less(y: int, z: int, t: int) -> bool:
    """True iff the bits of y above block t form a smaller number than z's."""
    if y < 0 or z < 0 or t < 0:
        raise ValueError("arguments must be nonnegative")
    return (y >> (3 * t + 3)) < (z >> (3 * t + 3))


def _parity_class(y: int, z: int) -> str:
    return ("A" if thue_morse_member(y) else "B") + (
        "A" if thue_morse_member(z) else "B"
    )


def classify_pair(y: int, z: int, n: int) -> RepPair:
    """Classify one representation: least toggle site, pattern, parity.

    The pair is toggleable iff a site exists and the bits of y above
    the site's window are strictly dominated by those of z.
    """
    if y + z != n or y < 0 or y >= z:
        raise ValueError(f"({y}, {z}) is not an ordered representation of {n}")
    site = None
    pattern = None
    for i in range(z.bit_length() + 1):
        window = (
            (y >> (i + 1)) & 1,
            (y >> (i + 2)) & 1,
            (z >> i) & 1,
            (z >> (i + 1)) & 1,
            (z >> (i + 2)) & 1,
        )
        if window == (0, 0, 0, 0, 1):
            site, pattern = i, PATTERN_00001
            break
        if window == (1, 0, 0, 1, 0):
            site, pattern = i, PATTERN_10010
            break
    toggleable = site is not None and (y >> (site + 3)) < (z >> (site + 3))
    return RepPair(y, z, site, pattern, toggleable, _parity_class(y, z))


def toggle(p: RepPair) -> RepPair:
    """Move 2^(site+1) between y and z; an involution on toggleable pairs.

    The image keeps the site, flips the pattern, and changes the total
    digit sum of (y, z) by exactly one, so its parity class moves
    between {AA, BB} and {AB, BA}.
    """
    if not p.toggleable or p.toggle_site is None:
        raise ValueError(f"pair ({p.y}, {p.z}) is not toggleable")
    n = p.y + p.z
    delta = 1 << (p.toggle_site + 1)
    if p.pattern == PATTERN_10010:
        image = classify_pair(p.y - delta, p.z + delta, n)
    else:
        image = classify_pair(p.y + delta, p.z - delta, n)
    if (
        not image.toggleable
        or image.toggle_site != p.toggle_site
        or image.pattern == p.pattern
    ):
        raise AssertionError(f"toggle image of ({p.y}, {p.z}) lost its structure")
    return image


def _pair_table(n: int) -> dict[str, np.ndarray]:
    """Vectorized classification of every representation of n."""
    if n < 1:
        raise ValueError("n must be positive")
    half = (n + 1) // 2
    y = np.arange(half, dtype=np.int64)
    z = n - y
    nsites = n.bit_length() + 1
    m00001 = np.empty((nsites, half), dtype=bool)
    m10010 = np.empty((nsites, half), dtype=bool)
    for i in range(nsites):
        y1 = (y >> (i + 1)) & 1
        y2 = (y >> (i + 2)) & 1
        z0 = (z >> i) & 1
        z1 = (z >> (i + 1)) & 1
        z2 = (z >> (i + 2)) & 1
        m00001[i] = (y1 == 0) & (y2 == 0) & (z0 == 0) & (z1 == 0) & (z2 == 1)
        m10010[i] = (y1 == 1) & (y2 == 0) & (z0 == 0) & (z1 == 1) & (z2 == 0)
    matched = m00001 | m10010
    has_site = matched.any(axis=0)
    site = matched.argmax(axis=0)
    cols = np.arange(half)
    is_10010 = m10010[site, cols]
    toggleable = has_site & ((y >> (site + 3)) < (z >> (site + 3)))
    evil_y = popcount_parity(y.astype(np.uint64)) == 0
    evil_z = popcount_parity(z.astype(np.uint64)) == 0
    return {
        "y": y,
        "z": z,
        "has_site": has_site,
        "site": site,
        "is_10010": is_10010,
        "toggleable": toggleable,
        "evil_y": evil_y,
        "evil_z": evil_z,
    }


def _class_counts(t: dict[str, np.ndarray], mask: np.ndarray) -> tuple[int, int, int, int]:
    ey, ez = t["evil_y"], t["evil_z"]
    aa = int(np.count_nonzero(mask & ey & ez))
    bb = int(np.count_nonzero(mask & ~ey & ~ez))
    ab = int(np.count_nonzero(mask & ey & ~ez))
    ba = int(np.count_nonzero(mask & ~ey & ez))
    return aa, bb, ab, ba


def _make_pair(t: dict[str, np.ndarray], idx: int) -> RepPair:
    y = int(t["y"][idx])
    z = int(t["z"][idx])
    has = bool(t["has_site"][idx])
    return RepPair(
        y,
        z,
        int(t["site"][idx]) if has else None,
        (PATTERN_10010 if t["is_10010"][idx] else PATTERN_00001) if has else None,
        bool(t["toggleable"][idx]),
        ("A" if t["evil_y"][idx] else "B") + ("A" if t["evil_z"][idx] else "B"),
    )


def toggle_pairs(n: int) -> PairClassification:
    """All toggleable pairs of n with their parity-class census."""
    t = _pair_table(n)
    mask = t["toggleable"]
    aa, bb, ab, ba = _class_counts(t, mask)
    members = tuple(_make_pair(t, int(i)) for i in np.nonzero(mask)[0])
    return PairClassification(n, aa, bb, ab, ba, members)


def toggle_counts(n: int) -> tuple[int, int, int, int]:
    """Class sizes (AA, BB, AB, BA) of the toggleable pairs of n."""
    t = _pair_table(n)
    return _class_counts(t, t["toggleable"])


def audit_toggle_involution(n: int) -> ToggleAudit:
    """Check every toggle-map property exhaustively for one n.

    closed: every image is again toggleable; site_preserved and
    pattern_flipped: the image's least site matches and its pattern is
    the other one (least-site equality is exactly minimality
    preservation); involution: toggling twice returns the original;
    parity_flipped: the image's digit-sum parity differs; balanced:
    |AA| + |BB| = |AB| + |BA|.
    """
    t = _pair_table(n)
    mask = t["toggleable"]
    aa, bb, ab, ba = _class_counts(t, mask)
    idx = np.nonzero(mask)[0]
    size = idx.size
    if size == 0:
        return ToggleAudit(n, 0, aa, bb, ab, ba, True, True, True, True, True, aa + bb == ab + ba)
    y = t["y"][idx]
    site = t["site"][idx]
    is_10010 = t["is_10010"][idx]
    delta = np.int64(1) << (site + 1)
    y_img = np.where(is_10010, y - delta, y + delta)
    # images should stay inside y < z, so y_img indexes the same table
    if not bool(np.all((y_img >= 0) & (y_img < t["y"].size))):
        return ToggleAudit(
            n, int(size), aa, bb, ab, ba, False, False, False, False, False,
            aa + bb == ab + ba,
        )
    img = y_img
    closed = bool(np.all(t["toggleable"][img]))
    site_preserved = bool(np.all(t["site"][img] == site))
    pattern_flipped = bool(np.all(t["is_10010"][img] != is_10010))
    delta_img = np.int64(1) << (t["site"][img] + 1)
    y_back = np.where(t["is_10010"][img], t["y"][img] - delta_img, t["y"][img] + delta_img)
    involution = bool(np.all(y_back == y))
    even_src = t["evil_y"][idx] == t["evil_z"][idx]
    even_img = t["evil_y"][img] == t["evil_z"][img]
    parity_flipped = bool(np.all(even_src != even_img))
    return ToggleAudit(
        n,
        int(size),
        aa,
        bb,
        ab,
        ba,
        closed,
        site_preserved,
        pattern_flipped,
        involution,
        parity_flipped,
        aa + bb == ab + ba,
    )


def _sieve_table(n: int) -> dict[str, np.ndarray]:
    profile = block_profile(n)
    if profile.count == 0:
        raise ValueError(f"n={n} has no marked digit block; the sieve is undefined")
    half = (n + 1) // 2
    y = np.arange(half, dtype=np.int64)
    z = n - y
    undecided = np.ones(half, dtype=bool)
    hit_block = np.full(half, -1, dtype=np.int64)
    for k in profile.positions:
        triple = (z >> (3 * k)) & 7
        hit = undecided & ((triple == 4) | (triple == 2))
        hit_block[hit] = k
        undecided &= ~hit
    with_hit = ~undecided
    shift = 3 * hit_block + 3
    dominated = with_hit & ((y >> shift) < (z >> shift))
    return {
        "y": y,
        "z": z,
        "missed": undecided,
        "failed": with_hit & ~dominated,
        "kept": with_hit & dominated,
    }


def sieve_counts(n: int) -> SplitCounts:
    """Sizes of the three sieve categories; total is ⌊(n+1)/2⌋."""
    t = _sieve_table(n)
    total = t["y"].size
    missed = int(np.count_nonzero(t["missed"]))
    failed = int(np.count_nonzero(t["failed"]))
    return SplitCounts(total, missed, failed, total - missed - failed)


def sieve_pairs(n: int) -> tuple[list[RepPair], SplitCounts]:
    """The kept pairs of the sieve, classified, plus the census."""
    t = _sieve_table(n)
    total = t["y"].size
    missed = int(np.count_nonzero(t["missed"]))
    failed = int(np.count_nonzero(t["failed"]))
    counts = SplitCounts(total, missed, failed, total - missed - failed)
    pairs = [
        classify_pair(int(t["y"][i]), int(t["z"][i]), n)
        for i in np.nonzero(t["kept"])[0]
    ]
    return pairs, counts


def audit_sieve(n: int) -> SieveAudit:
    """Census plus: kept pairs are all toggleable, and counts add up."""
    t = _sieve_table(n)
    total = t["y"].size
    missed = int(np.count_nonzero(t["missed"]))
    failed = int(np.count_nonzero(t["failed"]))
    kept_mask = t["kept"]
    kept = int(np.count_nonzero(kept_mask))
    counts = SplitCounts(total, missed, failed, total - missed - failed)
    pt = _pair_table(n)
    subset = bool(np.all(pt["toggleable"][kept_mask]))
    return SieveAudit(n, counts, subset, kept == counts.kept)


def deviation(a: SetPrefix, n: int, theta: float, kind: str = KIND_R2) -> float:
    """|R(A, n) - n/8| scaled by n^(1-theta)."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= theta < 1.0:
        raise ValueError("theta must lie in [0, 1)")
    count = r2(a, n) if kind == KIND_R2 else r3(a, n)
    return abs(count - n / 8.0) / float(n) ** (1.0 - theta)


def block_count_array(values: np.ndarray) -> np.ndarray:
    """Vectorized marked-block count for an array of nonnegative ints."""
    v = np.asarray(values, dtype=np.int64)
    if v.size == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(v.shape, dtype=np.int64)
    for t in range((int(v.max()).bit_length() + 2) // 3):
        out += ((v >> (3 * t)) & 7) == 5
    return out


def _dyadic_windows(x: int):
    hi = x
    while hi >= 1:
        lo = hi // 2
        yield lo, hi
        hi = lo


def density_profile(
    a: SetPrefix,
    x: int,
    theta: float,
    C: float,
    kind: str = KIND_R2,
    *,
    counts: np.ndarray | None = None,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> DensityReport:
    """Good-n fractions per dyadic window, plus per-block-count extremes.

    An n is good when |R(A, n) - n/8| <= C * n^(1-theta).  Windows are
    (x/2, x], (x/4, x/2], ... down to (0, 1]; an empty window reports
    no fraction.  ``counts`` may carry a precomputed range of R values
    to share across parameter combinations.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not 0.0 <= theta < 1.0:
        raise ValueError("theta must lie in [0, 1)")
    if C <= 0:
        raise ValueError("C must be positive")
    if x < 1:
        raise ValueError("x must be positive")
    if counts is None:
        rng = r2_range if kind == KIND_R2 else r3_range
        counts = rng(a, x, max_elements=max_elements)
    elif len(counts) < x + 1:
        raise ValueError("precomputed counts are shorter than x + 1")
    ns = np.arange(1, x + 1, dtype=np.float64)
    dev = np.abs(counts[1 : x + 1].astype(np.float64) - ns / 8.0)
    scale = np.power(ns, 1.0 - theta)
    good = dev <= C * scale
    windows = []
    for lo, hi in _dyadic_windows(x):
        total = hi - lo
        good_ct = int(np.count_nonzero(good[lo:hi]))
        fraction = good_ct / total if total > 0 else None
        windows.append(WindowStat(lo, hi, total, good_ct, fraction))
    fvals = block_count_array(np.arange(1, x + 1))
    normalized = dev / scale
    per_f = []
    for f in np.unique(fvals):
        sel = fvals == f
        per_f.append(
            FDeviation(int(f), int(np.count_nonzero(sel)), float(normalized[sel].max()))
        )
    return DensityReport(theta, C, kind, tuple(windows), tuple(per_f))


def density_grid(
    a: SetPrefix,
    x: int,
    thetas,
    cs,
    kind: str = KIND_R2,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> list[DensityReport]:
    """density_profile over a (theta, C) grid, sharing one range pass."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    rng = r2_range if kind == KIND_R2 else r3_range
    counts = rng(a, x, max_elements=max_elements)
    return [
        density_profile(a, x, theta, c, kind, counts=counts)
        for theta in thetas
        for c in cs
    ]
