"""Representation functions of complementary integer partitions.

Exact counting of R2/R3/R_{A,B}, construction and verification of the
partitions whose two halves share a representation function, the
digit-block sieve and toggle machinery behind the n/8 concentration,
and density/extremal measurement tools with a CLI front end.
"""

from .analysis import (
    DensityReport,
    DigitProfile,
    PairClassification,
    RepPair,
    SplitCounts,
    audit_sieve,
    audit_toggle_involution,
    block_hit,
    block_profile,
    classify_pair,
    density_grid,
    density_profile,
    deviation,
    high_bits_less,
    sieve_counts,
    sieve_pairs,
    toggle,
    toggle_pairs,
)
from .engine import (
    DEFAULT_MAX_ELEMENTS,
    ResourceLimitError,
    SetPrefix,
    complement_prefix,
    r2,
    r2_range,
    r3,
    r3_range,
    r_cross,
    r_cross_range,
    thue_morse_prefix,
)
from .extremal import ExtremeRecord, allones_zero_check, extremal_scan
from .partitions import (
    PartitionSpec,
    VerificationReport,
    balanced_initials,
    block_structure_check,
    check_digit_rules,
    dilation_check,
    extend_partition,
    preset_initial,
    verify_equality,
)
from .sequences import (
    DigitVector,
    digit_block,
    digits,
    evil_mask,
    popcount,
    thue_morse_member,
)

__version__ = "0.1.0"
