import math
import random

import numpy as np
import pytest

from repkit.engine import SetPrefix, thue_morse_prefix
from repkit.partitions import (
    PartitionSpec,
    VerificationReport,
    balanced_initials,
    block_structure_check,
    check_digit_rules,
    dilation_check,
    extend_partition,
    block_start_exponent,
    preset_initial,
    verify_equality,
)


def test_extend_reproduces_thue_morse():
    p = extend_partition(PartitionSpec("r2", 1, 1), 15)
    assert p.members() == [0, 3, 5, 6, 9, 10, 12, 15]
    big = extend_partition(PartitionSpec("r2", 1, 1), 4096)
    assert big == thue_morse_prefix(4096)


def test_extend_r3_variant():
    p = extend_partition(PartitionSpec("r3", 1, 1), 7)
    assert p.members() == [0, 2, 5, 6]


def test_extend_other_initial():
    p = extend_partition(PartitionSpec("r2", 1, 2), 3)
    assert p.members() == [1, 2]


def test_extend_is_consistent_under_reextension():
    spec = PartitionSpec("r2", 2, 0b1001)
    long = extend_partition(spec, 513)
    for shorter in (3, 64, 100):
        short = extend_partition(spec, shorter)
        assert short.bits == long.bits & ((1 << (shorter + 1)) - 1)


def test_extend_rejects_small_x():
    with pytest.raises(ValueError):
        extend_partition(PartitionSpec("r2", 2, 0b0011), 2)


def test_partition_spec_validates_weight():
    with pytest.raises(ValueError):
        PartitionSpec("r2", 2, 0b0111)
    with pytest.raises(ValueError):
        PartitionSpec("r2", 1, 0b100)  # bit beyond [0, 1]
    with pytest.raises(ValueError):
        PartitionSpec("r5", 1, 1)


def test_balanced_initials_counts_and_order():
    for n in (1, 2, 3):
        initials = balanced_initials(n)
        assert len(initials) == math.comb(2 * n, n)
        assert initials == sorted(initials)
        assert all(b.bit_count() == n for b in initials)


def test_presets():
    tm = preset_initial("thue-morse", 1)
    assert (tm.variant, tm.N, tm.initial) == ("r2", 1, 1)
    tm3 = preset_initial("thue-morse", 3)
    assert tm3.initial.bit_count() == 3
    assert extend_partition(tm3, 63) == thue_morse_prefix(63)
    cw = preset_initial("chen-wang", 1)
    assert (cw.variant, cw.N, cw.initial) == ("r3", 1, 1)
    assert extend_partition(preset_initial("chen-wang", 2), 7).members() == [0, 2, 5, 6]
    with pytest.raises(ValueError):
        preset_initial("nonsense")


def test_verify_equality_passes_on_thue_morse():
    report = verify_equality(thue_morse_prefix(4096), 1, 4096, "r2")
    assert report.passed and report.failures == ()
    assert report.checked_range == (1, 4096)


def test_verify_equality_r3_variant():
    p = extend_partition(PartitionSpec("r3", 1, 1), 4096)
    assert verify_equality(p, 1, 4096, "r3").passed


def test_verify_equality_flags_corruption():
    a = thue_morse_prefix(4096)
    bad = SetPrefix(a.bits ^ (1 << 5), 4096)
    report = verify_equality(bad, 1, 4096, "r2")
    assert not report.passed
    assert report.failures[0] == (5, 0, 1)


def test_verification_report_invariant():
    r = VerificationReport.build((0, 10), [])
    assert r.passed
    r = VerificationReport.build((0, 10), [(1, 2, 3)])
    assert not r.passed and r.failures == ((1, 2, 3),)


def test_check_digit_rules_variants():
    a = thue_morse_prefix(4096)
    assert check_digit_rules(a, 1, 4096, "r2") is True
    assert check_digit_rules(a, 1, 4096, "r3") is False
    bad_weight = SetPrefix(a.bits | 2, 4096)
    assert check_digit_rules(bad_weight, 1, 4096, "r2") is False


def test_check_digit_rules_on_constructed_sets():
    rng = random.Random(3)
    for n in (1, 2, 4):
        bitmap = rng.choice(balanced_initials(n))
        spec = PartitionSpec("r2", n, bitmap)
        a = extend_partition(spec, 1024)
        assert check_digit_rules(a, n, 1024, "r2")


def test_equality_window_implies_rules_window():
    # converse direction, finite form: equality up to x certifies the
    # recurrence only for m with 2m+1 <= x/4
    x = 2048
    for n, bitmap in ((1, 1), (2, 0b0110), (3, 0b101010)):
        a = extend_partition(PartitionSpec("r2", n, bitmap), x)
        assert verify_equality(a, n, x, "r2").passed
        assert check_digit_rules(a, n, x // 4, "r2")


def test_dilation_check_on_thue_morse():
    a = thue_morse_prefix((64 << 6) + 63)
    report = dilation_check(a, 1, 64, 6)
    assert report.passed
    assert report.checked_range == (1, 64)


def test_dilation_check_on_extensions():
    rng = random.Random(11)
    for n in (2, 5):
        bitmap = rng.choice(balanced_initials(n))
        a = extend_partition(PartitionSpec("r2", n, bitmap), (64 << 6) + 63)
        assert dilation_check(a, n, 64, 6).passed


def test_dilation_check_flags_corruption():
    bound = (64 << 6) + 63
    a = thue_morse_prefix(bound)
    bad = SetPrefix(a.bits ^ (1 << 100), bound)
    report = dilation_check(bad, 1, 64, 6)
    assert not report.passed
    assert any(((m << i) + k) == 100 for (m, i, k) in report.failures)


def test_dilation_check_rejects_short_prefix():
    with pytest.raises(ValueError):
        dilation_check(thue_morse_prefix(64), 1, 64, 6)


def test_block_start_exponent_values():
    assert [block_start_exponent(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [1, 2, 3, 3, 4, 4, 5]
    for n in range(1, 200):
        k0 = block_start_exponent(n)
        assert 2 ** (k0 - 2) < n <= 2 ** (k0 - 1)


def test_block_structure_on_thue_morse():
    report = block_structure_check(thue_morse_prefix(4096), PartitionSpec("r2", 1, 1), 6)
    assert report.passed
    assert report.k0 == 1
    assert report.checked_range == (2, 63)


def test_block_structure_on_extension():
    rng = random.Random(5)
    bitmap = rng.choice(balanced_initials(3))
    spec = PartitionSpec("r2", 3, bitmap)
    a = extend_partition(spec, 4096)
    report = block_structure_check(a, spec, 5)
    assert report.passed
    assert report.k0 == 3


def test_block_structure_pinpoints_corruption():
    spec = PartitionSpec("r2", 1, 1)
    a = thue_morse_prefix(4096)
    j, k = 17, 5
    bad = SetPrefix(a.bits ^ (1 << (j * 32 + 3)), 4096)
    report = block_structure_check(bad, spec, k)
    assert not report.passed
    assert [f[0] for f in report.failures] == [j]
    assert report.failures[0][2] == 1


def test_block_structure_rejects_misuse():
    with pytest.raises(ValueError):
        block_structure_check(thue_morse_prefix(64), PartitionSpec("r3", 1, 1), 3)
    with pytest.raises(ValueError):
        block_structure_check(thue_morse_prefix(64), PartitionSpec("r2", 1, 1), 6)
