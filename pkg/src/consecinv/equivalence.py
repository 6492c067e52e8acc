"""
Overlaps, changes between patterns, switching maps, and Wilf-type classification.

Two patterns of equal length can be compared at three levels over all
n <= n_max:

* ``wilf``: equal avoider counts |I_n(p)|;
* ``strong``: equal distributions of the number of occurrences;
* ``superstrong``: equal distributions of the occurrence-position set.

``classify`` partitions a set of patterns at any of these levels.  The
constructive side (``apply_change``, ``switch_all``, ``phi_blocks``)
implements the maps that prove the equivalences, so they can be tested
exhaustively on small n.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    UsageError,
    Word,
    _reduce,
    as_inversion_sequence,
    as_pattern,
    enumerate_patterns,
    find_occurrences,
    format_word,
    is_inversion_sequence,
)
from itertools import chain, combinations

import numpy as np

from .enumeration import (
    PROFILE_LIMIT,
    brute_count_avoiders,
    generate_all,
    occurrence_profiles,
    pattern_code,
    sequences_array,
    window_codes,
)
from .perms import VerificationError

__all__ = [
    "LEVELS",
    "LENGTH4_GROUPS",
    "EXTENSION_PAIRS",
    "ChangeReport",
    "EquivalencePartition",
    "is_nonoverlapping",
    "are_mutually_nonoverlapping",
    "is_changeable",
    "apply_change",
    "switch_all",
    "build_family_pattern",
    "block_decompose",
    "phi_blocks",
    "psi_blocks",
    "extends",
    "observed_extension",
    "extension_correspondence",
    "enumerate_patterns",
    "classify",
    "at_least_counts",
    "exact_from_at_least",
    "verify_changeability",
    "verify_switch",
    "verify_block_maps",
]

LEVELS = ("wilf", "strong", "superstrong")
WILF_LIMIT = 10


def _words(*texts: str) -> tuple[Word, ...]:
    return tuple(tuple(int(c) for c in t) for t in texts)


# the multi-pattern classes among consecutive patterns of length 4
LENGTH4_GROUPS: tuple[tuple[Word, ...], ...] = (
    _words("0102", "0112"),
    _words("0021", "0121"),
    _words("1002", "1012", "1102"),
    _words("0100", "0110"),
    _words("2013", "2103"),
    _words("1200", "1210", "1220"),
    _words("0211", "0221"),
    _words("1000", "1110"),
    _words("1001", "1011", "1101"),
    _words("2100", "2210"),
    _words("2001", "2011", "2101", "2201"),
    _words("2012", "2102"),
    _words("2010", "2110", "2120"),
    _words("3012", "3102"),
)

# patterns of length 4 extending 100 paired with patterns extending 110
EXTENSION_PAIRS: tuple[tuple[Word, Word], ...] = tuple(
    (a, b)
    for a, b in zip(
        _words("0100", "1002", "1200", "0211", "1000", "1001", "1100", "2100", "2001", "2110"),
        _words("0110", "1102", "1220", "0221", "1110", "1101", "1100", "2210", "2201", "2110"),
    )
)


# -- overlaps ---------------------------------------------------------------


def is_nonoverlapping(p: Sequence[int]) -> bool:
    """True iff two occurrences of p can share at most one entry."""
    p = as_pattern(p)
    r = len(p)
    if r < 2:
        raise UsageError("overlap is only defined for patterns of length >= 2")
    return all(_reduce(p[:i]) != _reduce(p[r - i :]) for i in range(2, r))


def are_mutually_nonoverlapping(p: Sequence[int], q: Sequence[int]) -> bool:
    p, q = as_pattern(p), as_pattern(q)
    r = len(p)
    if len(q) != r:
        raise UsageError("patterns must have equal length")
    if r < 2:
        raise UsageError("overlap is only defined for patterns of length >= 2")
    return all(
        _reduce(p[:i]) != _reduce(q[r - i :]) and _reduce(q[:i]) != _reduce(p[r - i :])
        for i in range(2, r)
    )


# -- changes ---------------------------------------------------------------


def _check_change_shape(p: Word, q: Word) -> None:
    if len(p) != len(q):
        raise UsageError("patterns must have equal length")
    if p[0] != q[0] or p[-1] != q[-1] or max(p) != max(q):
        raise UsageError(
            f"{format_word(p)} and {format_word(q)} must share first letter, last letter and maximum"
        )


def _change_bound(p: Word, t: int) -> int:
    """Largest letter position t (1-based) may take after a change out of p."""
    r = len(p)
    left = max(p[j - 1] for j in range(1, t + 1))
    right = max((p[j - 1] - j + t for j in range(t + 1, r + 1)), default=left)
    return max(left, right)


def _first_violation(p: Word, q: Word) -> int | None:
    for t in range(1, len(p) + 1):
        if q[t - 1] > _change_bound(p, t):
            return t
    return None


def _witness(p: Word, q: Word, t: int) -> Word:
    """Inversion sequence with an occurrence of p whose change into q is invalid.

    Prefix p with s zeros, s as small as keeps the result an inversion
    sequence and keeps the shift below non-negative, then lift every
    entry >= q_t by s + t - q_t.  The changed entry at position s + t then
    equals s + t.
    """
    r = len(p)
    target = q[t - 1]
    s = max([p[j - 1] - j + 1 for j in range(1, r + 1)] + [target - t, 0])
    c = (0,) * s + p
    shift = s + t - target
    return tuple(v + shift if v >= target else v for v in c)


@dataclass
class ChangeReport:
    source: Word
    target: Word
    changeable_forward: bool
    changeable_backward: bool
    witness: Word | None = None
    witness_backward: Word | None = None

    @property
    def interchangeable(self) -> bool:
        return self.changeable_forward and self.changeable_backward


def is_changeable(p: Sequence[int], q: Sequence[int]) -> ChangeReport:
    """Decide whether every occurrence of p can be validly changed into q, and back.

    A failing direction comes with a witness sequence, which is checked
    before it is returned.
    """
    p, q = as_pattern(p), as_pattern(q)
    _check_change_shape(p, q)
    report = ChangeReport(p, q, True, True)
    for forward, (a, b) in ((True, (p, q)), (False, (q, p))):
        t = _first_violation(a, b)
        if t is None:
            continue
        w = _witness(a, b, t)
        start = len(w) - len(a) + 1
        if not is_inversion_sequence(w) or apply_change(w, start, a, b) is not None:
            raise AssertionError(f"witness construction failed for {a} -> {b}")
        if forward:
            report.changeable_forward, report.witness = False, w
        else:
            report.changeable_backward, report.witness_backward = False, w
    return report


def _rewrite(window: Word, p: Word, q: Word) -> Word:
    values = sorted(set(window))
    return tuple(values[letter] for letter in q)


def apply_change(e: Sequence[int], i: int, p: Sequence[int], q: Sequence[int]) -> Word | None:
    """Change the occurrence of p at 1-based position i into q.

    Returns the new sequence, or None when the result is not an inversion
    sequence (the change is invalid).
    """
    e, p, q = tuple(e), as_pattern(p), as_pattern(q)
    _check_change_shape(p, q)
    r = len(p)
    if not 1 <= i <= len(e) - r + 1 or _reduce(e[i - 1 : i - 1 + r]) != p:
        raise UsageError(f"no occurrence of {format_word(p)} at position {i}")
    new = e[: i - 1] + _rewrite(e[i - 1 : i - 1 + r], p, q) + e[i - 1 + r :]
    return new if is_inversion_sequence(new) else None


def switch_all(e: Sequence[int], p: Sequence[int], q: Sequence[int]) -> Word:
    """Swap every occurrence of p with q and every occurrence of q with p, simultaneously.

    Requires p and q non-overlapping, mutually non-overlapping and
    interchangeable; then occurrences share at most an end entry, which
    no change touches, and the map is an involution on I_n.
    """
    e, p, q = tuple(e), as_pattern(p), as_pattern(q)
    _check_change_shape(p, q)
    if not (
        is_nonoverlapping(p)
        and is_nonoverlapping(q)
        and are_mutually_nonoverlapping(p, q)
        and is_changeable(p, q).interchangeable
    ):
        raise UsageError(f"{format_word(p)} and {format_word(q)} cannot be switched simultaneously")
    r = len(p)
    out = list(e)
    for a, b in ((p, q), (q, p)):
        for i in find_occurrences(e, a):
            out[i - 1 : i - 1 + r] = _rewrite(e[i - 1 : i - 1 + r], a, b)
    result = tuple(out)
    if not is_inversion_sequence(result):
        raise AssertionError("switch produced an invalid sequence")
    return result


# -- block maps for the 0^r 1 0^r 2 ... and s 0^r (s-1) ... families ----------


def build_family_pattern(member: str, r: int = 1, s: int = 2) -> Word:
    """Letters of one member of the two infinite families of equivalent patterns.

    ``A1`` = 0^r 1 0^r 2 ... (s-1) 0^r s and ``A2`` = 0^r 1 1^r 2 ... (s-1)^r s;
    ``B1`` = s 0^r (s-1) 0^r ... 1 0^r, ``B2`` = s (s-1)^r s (s-2)^r ... s 0^r
    and ``B3`` = s (s-1)^r (s-1) (s-2)^r ... 1 0^r.
    """
    if r < 1 or s < 2:
        raise UsageError(f"families need r >= 1 and s >= 2, got r={r}, s={s}")
    if member == "A1":
        word = [0] * r + [x for a in range(1, s) for x in [a] + [0] * r] + [s]
    elif member == "A2":
        word = [0] * r + [x for a in range(1, s) for x in [a] * (r + 1)] + [s]
    elif member == "B1":
        word = [x for c in range(s, 0, -1) for x in [c] + [0] * r]
    elif member == "B2":
        word = [x for c in range(s - 1, -1, -1) for x in [s] + [c] * r]
    elif member == "B3":
        word = [s] + [s - 1] * r + [x for c in range(s - 1, 0, -1) for x in [c] + [c - 1] * r]
    else:
        raise UsageError(f"unknown family member {member!r}")
    return as_pattern(word)


def block_decompose(S: Iterable[int], step_unit: int, max_multiplier: int) -> list[list[int]]:
    """Split S into maximal runs whose consecutive gaps are a * step_unit, 1 <= a <= max_multiplier.

    Any other gap must leave the two occurrences sharing at most one entry,
    i.e. be at least (max_multiplier + 1) * step_unit - 1.
    """
    S = sorted(S)
    if len(set(S)) != len(S):
        raise UsageError("positions must be distinct")
    blocks: list[list[int]] = []
    for x in S:
        if blocks:
            d = x - blocks[-1][-1]
            if d % step_unit == 0 and d // step_unit <= max_multiplier:
                blocks[-1].append(x)
                continue
            if d < (max_multiplier + 1) * step_unit - 1:
                raise UsageError(f"positions {blocks[-1][-1]} and {x} are closer than allowed")
        blocks.append([x])
    return blocks


_TARGETS = {"A": ("A1", ("A2",)), "B": ("B1", ("B3", "B2"))}


def _family_setup(family: str, target: str | None, r: int, s: int) -> tuple[Word, Word, str]:
    if family not in _TARGETS:
        raise UsageError(f"family must be 'A' or 'B', got {family!r}")
    source, targets = _TARGETS[family]
    target = target or targets[0]
    if target not in targets:
        raise UsageError(f"target {target!r} not in family {family}")
    return build_family_pattern(source, r, s), build_family_pattern(target, r, s), target


def _block_spans(e: Word, S: Iterable[int], pattern: Word, r: int, s: int):
    S = sorted(S)
    em = set(find_occurrences(e, pattern))
    if not set(S) <= em:
        raise UsageError(f"positions {sorted(set(S) - em)} are not occurrences of {format_word(pattern)}")
    unit = r + 1
    for block in block_decompose(S, unit, s - 1):
        first = block[0] - 1  # 0-based
        top = (block[-1] - block[0]) // unit + s - 1
        yield first, top


def phi_blocks(
    e: Sequence[int], S: Iterable[int], family: str = "A", r: int = 1, s: int = 2,
    target: str | None = None,
) -> Word:
    """Change the source-pattern occurrences at the positions in S into the target pattern.

    Family ``A`` maps A1 -> A2; family ``B`` maps B1 -> B3 (default) or B1 -> B2.
    Occurrences inside one block sit on a grid of period r + 1 starting at
    the block's first position; letters and zero-runs alternate on it.
    """
    e = as_inversion_sequence(e)
    source, _, target = _family_setup(family, target, r, s)
    unit = r + 1
    out = list(e)
    for f, top in _block_spans(e, S, source, r, s):
        if family == "A":
            # run m (m >= 1) copies the letter just before it
            for m in range(1, top + 1):
                for b in range(r):
                    out[f + m * unit + b] = e[f + m * unit - 1]
        else:
            # run m (m < top) copies the letter just after it
            for m in range(top):
                for b in range(1, r + 1):
                    out[f + m * unit + b] = e[f + (m + 1) * unit]
            if target == "B2":
                for m in range(1, top + 1):
                    out[f + m * unit] = e[f]
    return tuple(out)


def psi_blocks(
    e: Sequence[int], S: Iterable[int], family: str = "A", r: int = 1, s: int = 2,
    target: str | None = None,
) -> Word:
    """Inverse of ``phi_blocks``: change target occurrences at S back into the source pattern."""
    e = as_inversion_sequence(e)
    _, tgt, target = _family_setup(family, target, r, s)
    unit = r + 1
    out = list(e)
    for f, top in _block_spans(e, S, tgt, r, s):
        if family == "A":
            zero = e[f]
            for m in range(1, top + 1):
                for b in range(r):
                    out[f + m * unit + b] = zero
        else:
            zero = e[f + top * unit + 1]
            if target == "B2":
                for m in range(1, top + 1):
                    out[f + m * unit] = e[f + (m - 1) * unit + 1]
            for m in range(top):
                for b in range(1, r + 1):
                    out[f + m * unit + b] = zero
    return tuple(out)


# -- extensions --------------------------------------------------------------


def extends(p: Sequence[int], q: Sequence[int]) -> str:
    """How p extends the shorter pattern q: 'right', 'left', 'both' or 'none'.

    p extends q on the right when the leftmost len(q) entries of every
    occurrence of p form an occurrence of q.  Reduction commutes with taking
    sub-windows, so this holds exactly when the leftmost letters of p reduce
    to q.
    """
    p, q = as_pattern(p), as_pattern(q)
    if len(p) <= len(q):
        raise UsageError("p must be longer than q")
    right = _reduce(p[: len(q)]) == q
    left = _reduce(p[-len(q) :]) == q
    return {(True, True): "both", (True, False): "right", (False, True): "left"}.get(
        (right, left), "none"
    )


def observed_extension(p: Sequence[int], q: Sequence[int], n: int = 7) -> str:
    """The extension relation as seen on every occurrence of p in all of I_n."""
    p, q = as_pattern(p), as_pattern(q)
    r, t = len(p), len(q)
    seen = False
    right = left = True
    for e in generate_all(n):
        for i in find_occurrences(e, p):
            seen = True
            right = right and _reduce(e[i - 1 : i - 1 + t]) == q
            left = left and _reduce(e[i - 1 + r - t : i - 1 + r]) == q
    if not seen:
        raise UsageError(f"{format_word(p)} never occurs in I_{n}")
    return {(True, True): "both", (True, False): "right", (False, True): "left"}.get(
        (right, left), "none"
    )


def extension_correspondence(n_max: int = 8, verify: bool = True, workers: int = 1):
    """The ten pairs (p extending 100, p' extending 110) with p and p' super-strongly equivalent.

    With ``verify`` the extension claims and the equivalences (position-set
    distributions equal for every n <= n_max) are checked, raising
    VerificationError with the failing n or pair.
    """
    pairs = list(EXTENSION_PAIRS)
    if not verify:
        return pairs
    for a, b in pairs:
        if extends(a, (1, 0, 0)) == "none" or extends(b, (1, 1, 0)) == "none":
            raise VerificationError(f"{format_word(a)} -> {format_word(b)} is not an extension pair", (a, b))
    patterns = sorted({x for pair in pairs for x in pair})
    for n in range(1, n_max + 1):
        profiles = occurrence_profiles(patterns, n, workers=workers)
        for a, b in pairs:
            if profiles[a].by_set != profiles[b].by_set:
                raise VerificationError(
                    f"{format_word(a)} and {format_word(b)} differ at n={n}", witness=n
                )
    return pairs


# -- inclusion-exclusion over position sets ---------------------------------------


def _key_to_set(key: str) -> frozenset[int]:
    return frozenset(int(x) for x in key.split(",")) if key else frozenset()


def at_least_counts(by_set: dict[str, int], universe: Iterable[int]) -> dict[frozenset, int]:
    """f_>=(S) = #{e : Em(p, e) contains S} for every S within `universe`, by summing over supersets."""
    universe = sorted(universe)
    exact = {_key_to_set(k): v for k, v in by_set.items()}
    out = {}
    for size in range(len(universe) + 1):
        for S in combinations(universe, size):
            S = frozenset(S)
            out[S] = sum(v for T, v in exact.items() if S <= T)
    return out


def exact_from_at_least(at_least: dict[frozenset, int]) -> dict[frozenset, int]:
    """Recover #{e : Em = T} by Moebius inversion over the subset lattice."""
    return {
        T: sum((-1) ** len(S - T) * v for S, v in at_least.items() if T <= S) for T in at_least
    }


# -- classification ------------------------------------------------------------


@dataclass
class EquivalencePartition:
    level: str
    n_max: int
    classes: list[list[Word]]
    evidence: list[str] = field(default_factory=list)

    @property
    def evidence_digest(self) -> str:
        return hashlib.sha256("|".join(self.evidence).encode()).hexdigest()[:16]

    def class_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for c in self.classes:
            sizes[len(c)] = sizes.get(len(c), 0) + 1
        return dict(sorted(sizes.items(), reverse=True))

    def merged(self) -> list[list[Word]]:
        return [c for c in self.classes if len(c) > 1]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "n_max": self.n_max,
            "num_classes": len(self.classes),
            "classes": [[format_word(p) for p in c] for c in self.classes],
            "evidence_digest": self.evidence_digest,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _signatures(patterns: list[Word], n_max: int, level: str, workers: int) -> dict[Word, tuple]:
    if level == "wilf":
        return {p: tuple(brute_count_avoiders(p, n, None) for n in range(1, n_max + 1)) for p in patterns}
    sigs: dict[Word, list] = {p: [] for p in patterns}
    for n in range(1, n_max + 1):
        profiles = occurrence_profiles(patterns, n, workers=workers, limit=None)
        for p in patterns:
            prof = profiles[p]
            sigs[p].append(prof.count_digest() if level == "strong" else prof.set_digest())
    return {p: tuple(v) for p, v in sigs.items()}


def classify(
    patterns: Iterable[Sequence[int]],
    n_max: int,
    level: str = "wilf",
    workers: int = 1,
    limit: int | None = None,
) -> EquivalencePartition:
    """Partition same-length patterns by equality of their statistics for every n <= n_max.

    Classes are listed by their lexicographically least member.
    """
    pats = sorted({as_pattern(p) for p in patterns})
    if level not in LEVELS:
        raise UsageError(f"level must be one of {LEVELS}, got {level!r}")
    if not pats:
        raise UsageError("no patterns to classify")
    if len({len(p) for p in pats}) != 1:
        raise UsageError("all patterns must have the same length")
    if limit is None:
        limit = WILF_LIMIT if level == "wilf" else PROFILE_LIMIT
    if n_max < 1:
        raise UsageError(f"n_max must be at least 1, got {n_max}")
    if n_max > limit:
        raise UsageError(f"n_max={n_max} exceeds the {level} limit {limit}")
    sigs = _signatures(pats, n_max, level, workers)
    groups: dict[tuple, list[Word]] = {}
    for p in pats:
        groups.setdefault(sigs[p], []).append(p)
    classes = sorted(groups.values(), key=lambda c: c[0])
    evidence = [
        hashlib.sha256(json.dumps([format_word(c[0]), list(sigs[c[0]])]).encode()).hexdigest()[:16]
        for c in classes
    ]
    return EquivalencePartition(level, n_max, classes, evidence)


# -- exhaustive checks of the constructive maps ----------------------------------


def _occurrence_rows(p: Word, n: int):
    """(e, Em(p, e)) for every e in I_n with at least one occurrence of p."""
    arr = sequences_array(n)
    hits = window_codes(arr, len(p)) == pattern_code(p)
    for row in np.flatnonzero(hits.any(axis=1)):
        yield tuple(int(v) for v in arr[row]), [int(i) + 1 for i in np.flatnonzero(hits[row])]


def _subsets(items: list[int]):
    return chain.from_iterable(combinations(items, k) for k in range(1, len(items) + 1))


def verify_changeability(length: int, n: int = 7) -> int:
    """Compare ``is_changeable`` with actual changes on every occurrence in I_n.

    Covers each ordered pair of distinct length-`length` patterns sharing
    first letter, last letter and maximum.  Validity of a change depends
    only on the position and the window, so each distinct (position,
    window) is tried once.  Returns the number of pairs checked.
    """
    patterns = enumerate_patterns(length)
    windows: dict[Word, set[tuple[int, Word]]] = {p: set() for p in patterns}
    for e in generate_all(n, None):
        for i in range(n - length + 1):
            w = e[i : i + length]
            windows[_reduce(w)].add((i + 1, w))
    checked = 0
    for p in patterns:
        for q in patterns:
            if p == q or p[0] != q[0] or p[-1] != q[-1] or max(p) != max(q):
                continue
            verdict = is_changeable(p, q).changeable_forward
            bad = next(
                (
                    (i, w)
                    for i, w in sorted(windows[p])
                    if not is_inversion_sequence(_shifted_change(w, i, p, q))
                ),
                None,
            )
            if verdict != (bad is None):
                raise VerificationError(
                    f"{format_word(p)} -> {format_word(q)}: verdict {verdict} but window {bad}", (p, q)
                )
            checked += 1
    return checked


def _shifted_change(window: Word, i: int, p: Word, q: Word) -> Word:
    # the changed window placed at 1-based position i, padded in front so
    # that the inversion-sequence test sees the right positions
    return (0,) * (i - 1) + _rewrite(window, p, q)


def verify_switch(p: Sequence[int], q: Sequence[int], n: int) -> int:
    """``switch_all`` is an involution on I_n that exchanges Em(p, .) and Em(q, .)."""
    p, q = as_pattern(p), as_pattern(q)
    count = 0
    for e in generate_all(n, None):
        f = switch_all(e, p, q)
        if switch_all(f, p, q) != e or find_occurrences(f, p) != find_occurrences(e, q) or (
            find_occurrences(f, q) != find_occurrences(e, p)
        ):
            raise VerificationError(f"switch fails at {format_word(e)}", e)
        count += 1
    return count


def verify_block_maps(
    n: int, family: str = "A", r: int = 1, s: int = 2, target: str | None = None
) -> int:
    """Round trip of ``phi_blocks``/``psi_blocks`` over all of I_n and all position sets.

    For every e and every non-empty S within the source occurrences, the
    image must contain the target pattern at S and map back to e; the same
    is checked from the target side.  Together these make (e, S) -> (e', S)
    a bijection.  Returns the number of (e, S) pairs checked.
    """
    source, tgt, target = _family_setup(family, target, r, s)
    count = 0
    for forward, (a, b) in ((True, (source, tgt)), (False, (tgt, source))):
        go, back = (phi_blocks, psi_blocks) if forward else (psi_blocks, phi_blocks)
        for e, em in _occurrence_rows(a, n):
            for S in _subsets(em):
                image = go(e, S, family, r, s, target)
                if not set(S) <= set(find_occurrences(image, b)) or back(
                    image, S, family, r, s, target
                ) != e:
                    raise VerificationError(
                        f"{format_word(a)} -> {format_word(b)} fails at {format_word(e)}, S={S}", (e, S)
                    )
                count += 1
    return count
