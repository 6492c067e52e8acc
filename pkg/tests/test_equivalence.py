from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from consecinv.core import UsageError, enumerate_patterns, find_occurrences, parse_word
from consecinv.enumeration import brute_count_avoiders, generate_all, occurrence_profile
from consecinv.equivalence import (
    EXTENSION_PAIRS,
    LENGTH4_GROUPS,
    apply_change,
    are_mutually_nonoverlapping,
    at_least_counts,
    block_decompose,
    build_family_pattern,
    classify,
    exact_from_at_least,
    extends,
    extension_correspondence,
    is_changeable,
    is_nonoverlapping,
    observed_extension,
    phi_blocks,
    psi_blocks,
    switch_all,
    verify_block_maps,
    verify_changeability,
    verify_switch,
)
from consecinv.perms import VerificationError

P3 = enumerate_patterns(3)
P4 = enumerate_patterns(4)
W = parse_word


# -- overlaps ---------------------------------------------------------------


def test_overlap_examples():
    assert is_nonoverlapping(W("110"))
    assert not is_nonoverlapping(W("1100"))
    assert not is_nonoverlapping(W("000"))
    assert are_mutually_nonoverlapping(W("110"), W("010"))
    assert not are_mutually_nonoverlapping(W("110"), W("100"))
    with pytest.raises(UsageError):
        is_nonoverlapping((0,))
    with pytest.raises(UsageError):
        are_mutually_nonoverlapping(W("110"), W("0100"))


@given(st.sampled_from(P3 + P4))
def test_self_mutual_overlap_is_overlap(p):
    assert are_mutually_nonoverlapping(p, p) == is_nonoverlapping(p)


@pytest.mark.parametrize("p", P3 + P4, ids=lambda p: "".join(map(str, p)))
def test_nonoverlap_matches_occurrences_in_small_sequences(p):
    # two occurrences of a non-overlapping pattern never share two entries
    r = len(p)
    shared_two = any(
        0 < j - i < r - 1
        for e in generate_all(7)
        for i, j in combinations(find_occurrences(e, p), 2)
    )
    if is_nonoverlapping(p):
        assert not shared_two


# -- changes ----------------------------------------------------------------


def test_change_examples():
    e = W("00134015331")
    assert apply_change(e, 7, W("02110"), W("02100")) == W("00134015311")
    assert apply_change(e, 2, W("01230"), W("03210")) is None
    assert apply_change(e, 7, W("02110"), W("02110")) == e
    with pytest.raises(UsageError):
        apply_change(e, 1, W("02110"), W("02100"))


def test_changeability_examples():
    report = is_changeable(W("01230"), W("03210"))
    assert not report.changeable_forward
    w = report.witness
    assert apply_change(w, len(w) - 4, W("01230"), W("03210")) is None
    assert is_changeable(W("0021"), W("0121")).interchangeable
    assert is_changeable(W("0102"), W("0102")).interchangeable
    with pytest.raises(UsageError):
        is_changeable(W("012"), W("010"))


def _shape_pairs(patterns):
    return [
        (p, q)
        for p in patterns
        for q in patterns
        if len(p) == len(q) and p[0] == q[0] and p[-1] == q[-1] and max(p) == max(q)
    ]


@given(st.sampled_from(_shape_pairs(P4 + enumerate_patterns(5))))
@settings(max_examples=80, deadline=None)
def test_witness_is_a_genuine_counterexample(pair):
    p, q = pair
    report = is_changeable(p, q)
    for ok, w, a, b in (
        (report.changeable_forward, report.witness, p, q),
        (report.changeable_backward, report.witness_backward, q, p),
    ):
        if ok:
            assert w is None
        else:
            i = len(w) - len(a) + 1
            assert i in find_occurrences(w, a)
            assert apply_change(w, i, a, b) is None


def test_changeability_verdicts_exhaustive_on_I7():
    assert verify_changeability(3, 7) > 0
    assert verify_changeability(4, 7) > 0


def test_switch_example():
    assert switch_all(W("00032454"), W("0021"), W("0121")) == W("00232254")
    assert switch_all(W("0000"), W("0021"), W("0121")) == W("0000")
    with pytest.raises(UsageError):
        switch_all(W("0000"), W("0102"), W("0112"))


def test_switch_is_involution_exchanging_occurrences():
    assert verify_switch(W("0021"), W("0121"), 7) == 5040


# -- block maps -------------------------------------------------------------


def test_family_members():
    assert build_family_pattern("A1") == W("0102")
    assert build_family_pattern("A2") == W("0112")
    assert build_family_pattern("B1") == W("2010")
    assert build_family_pattern("B2") == W("2120")
    assert build_family_pattern("B3") == W("2110")
    assert build_family_pattern("A1", 2, 2) == W("001002")
    assert build_family_pattern("A2", 2, 3) == W("001112223")
    assert build_family_pattern("B2", 2, 3) == W("322311300")
    assert build_family_pattern("B3", 1, 3) == W("322110")
    with pytest.raises(UsageError):
        build_family_pattern("C1")
    with pytest.raises(UsageError):
        build_family_pattern("A1", 0, 2)


@pytest.mark.parametrize("r, s", [(1, 2), (2, 2), (1, 3), (3, 2), (2, 3)])
def test_family_members_are_reduced_and_same_length(r, s):
    words = [build_family_pattern(m, r, s) for m in ("A1", "A2", "B1", "B2", "B3")]
    assert all(len(w) == s * (r + 1) for w in words)
    for w in words:
        assert max(w) == s


def test_block_decompose():
    assert block_decompose({3, 5, 9}, 2, 1) == [[3, 5], [9]]
    assert block_decompose(set(), 2, 1) == []
    assert block_decompose({4}, 2, 1) == [[4]]
    with pytest.raises(UsageError):
        block_decompose({3, 4}, 2, 1)


def test_block_map_example():
    e = W("0102040523262889")
    image = phi_blocks(e, {3, 5, 9})
    assert image == W("0102244523362889")
    assert psi_blocks(image, {3, 5, 9}) == e
    assert phi_blocks(e, set()) == e
    with pytest.raises(UsageError):
        phi_blocks(e, {2})


@pytest.mark.parametrize(
    "family, target, r, s",
    [("A", None, 1, 2), ("B", "B3", 1, 2), ("B", "B2", 1, 2), ("A", None, 2, 2), ("A", None, 1, 3),
     ("B", "B3", 2, 2), ("B", "B2", 2, 2), ("B", "B3", 1, 3), ("B", "B2", 1, 3)],
)
def test_block_maps_round_trip_on_I8(family, target, r, s):
    verify_block_maps(8, family, r, s, target)


@pytest.mark.parametrize("r, s", [(1, 2), (2, 2), (1, 3)])
def test_generalized_families_are_superstrong(r, s):
    a = [build_family_pattern(m, r, s) for m in ("A1", "A2")]
    b = [build_family_pattern(m, r, s) for m in ("B1", "B2", "B3")]
    for n in range(1, 9):
        assert len({tuple(sorted(occurrence_profile(p, n).by_set.items())) for p in a}) == 1
        assert len({tuple(sorted(occurrence_profile(p, n).by_set.items())) for p in b}) == 1


# -- extensions -------------------------------------------------------------


def test_extends_examples():
    assert extends(W("1102"), W("110")) == "right"
    assert extends(W("2110"), W("110")) == "left"
    assert extends(W("0123"), W("210")) == "none"
    assert extends(W("0000"), W("000")) == "both"
    with pytest.raises(UsageError):
        extends(W("110"), W("110"))


@pytest.mark.parametrize("p", P4, ids=lambda p: "".join(map(str, p)))
def test_letter_level_extension_matches_occurrences(p):
    for q in (W("100"), W("110")):
        assert extends(p, q) == observed_extension(p, q, 7)


def test_extension_pairs():
    assert len(EXTENSION_PAIRS) == 10
    assert extension_correspondence(n_max=7) == list(EXTENSION_PAIRS)


# -- inclusion-exclusion ----------------------------------------------------


@pytest.mark.parametrize("p", [W("100"), W("110"), W("0102"), W("000")])
def test_moebius_inversion_recovers_exact_counts(p):
    n = 7
    prof = occurrence_profile(p, n)
    universe = range(1, n - len(p) + 2)
    at_least = at_least_counts(prof.by_set, universe)
    assert at_least[frozenset()] == 5040
    exact = exact_from_at_least(at_least)
    expected = {frozenset(int(x) for x in k.split(",")) if k else frozenset(): v for k, v in prof.by_set.items()}
    assert {k: v for k, v in exact.items() if v} == expected
    assert exact[frozenset()] == brute_count_avoiders(p, n)


# -- classification ---------------------------------------------------------


def test_length3_partition():
    part = classify(P3, 8, "superstrong")
    assert len(part.classes) == 12
    assert part.merged() == [[W("100"), W("110")]]
    assert part.to_dict()["num_classes"] == 12


def test_trivial_partitions():
    assert classify([(0,)], 3, "wilf").classes == [[(0,)]]
    assert len(classify([W("0102")], 5, "strong").classes) == 1
    with pytest.raises(UsageError):
        classify([W("01"), W("010")], 4)
    with pytest.raises(UsageError):
        classify(P3, 9, "superstrong")
    with pytest.raises(UsageError):
        classify(P3, 4, "weak")


def test_levels_refine_each_other():
    wilf = classify(P4, 8, "wilf")
    strong = classify(P4, 8, "strong")
    superstrong = classify(P4, 8, "superstrong")
    as_sets = lambda part: [set(c) for c in part.classes]
    for c in as_sets(superstrong):
        assert any(c <= d for d in as_sets(strong))
    for c in as_sets(strong):
        assert any(c <= d for d in as_sets(wilf))


def test_partition_is_deterministic():
    a = classify(P3, 7, "superstrong").to_json()
    b = classify(list(reversed(P3)), 7, "superstrong", workers=2).to_json()
    assert a == b


def test_length4_groups_are_superstrong_at_small_n():
    part = classify(P4, 8, "superstrong")
    for group in LENGTH4_GROUPS:
        assert any(set(group) <= set(c) for c in part.classes)


def test_length4_wilf_partition_needs_eleven_terms():
    # 3012, 3021, 3102, 3201 agree for n <= 10 and first separate at n = 11
    quartet = [W("3012"), W("3021"), W("3102"), W("3201")]
    assert len({brute_count_avoiders(p, 10) for p in quartet}) == 1
    assert [brute_count_avoiders(p, 11, None) for p in quartet] == [38922972, 38923020, 38922972, 38922900]
    part = classify(P4, 11, "wilf", limit=11)
    assert sorted(tuple(c) for c in part.merged()) == sorted(LENGTH4_GROUPS)
    assert part.class_sizes() == {4: 1, 3: 4, 2: 9, 1: 41}


def test_length4_partitions_at_ten_terms():
    wilf = classify(P4, 10, "wilf")
    assert len(wilf.classes) == 53
    extra = [c for c in wilf.merged() if tuple(c) not in LENGTH4_GROUPS]
    assert extra == [[W("3012"), W("3021"), W("3102"), W("3201")]]


def test_extension_check_reports_failures(monkeypatch):
    from consecinv import equivalence

    monkeypatch.setattr(equivalence, "EXTENSION_PAIRS", ((W("0100"), W("0102")),))
    with pytest.raises(VerificationError):
        equivalence.extension_correspondence(4)
