"""
Inversion sequences avoiding consecutive patterns.

Brute-force enumeration, closed recurrences for the length-3 patterns,
the inversion-sequence encoding of permutations, and classification of
patterns up to (strong, super-strong) Wilf equivalence.
"""

from .core import (
    UsageError,
    as_inversion_sequence,
    as_pattern,
    contains_classical,
    contains_consecutive,
    enumerate_patterns,
    find_occurrences,
    format_word,
    is_inversion_sequence,
    parse_word,
    reduce_word,
)
from .enumeration import (
    CountTable,
    EnumerationLimitError,
    OccurrenceProfile,
    brute_count_avoiders,
    brute_count_refined,
    count_table,
    generate_all,
    generate_avoiders,
    occurrence_profile,
    occurrence_profiles,
)
from .equivalence import (
    EquivalencePartition,
    apply_change,
    are_mutually_nonoverlapping,
    block_decompose,
    build_family_pattern,
    classify,
    extends,
    extension_correspondence,
    is_changeable,
    is_nonoverlapping,
    phi_blocks,
    psi_blocks,
    switch_all,
)
from .perms import (
    VerificationError,
    VincularPattern,
    contains_vincular,
    reverse_complement,
    theta,
    theta_inverse,
)
from .recurrences import (
    derangements,
    rec_count_000,
    rec_count_zeros,
    rec_table_012_fast,
    rec_table_210_fast,
    rec_table_len3,
    recurrence_count,
)

__version__ = "0.1.0"
