"""
Exhaustive enumeration of inversion sequences and pattern statistics.

Three independent engines live here, and the tests cross-check them:

* ``generate_all`` / ``generate_avoiders`` walk I_n one sequence at a time
  (the avoider walk cuts a branch as soon as its newest r entries form p);
* ``refined_avoider_counts`` runs the same depth-first search but shares
  subtrees between prefixes that end in the same r-1 entries, since the
  rest of the search only ever looks at those entries.  Exact, and fast
  enough for n well beyond 12;
* ``occurrence_profiles`` / ``avoider_counts`` materialise I_n as a numpy
  array and encode every window by its pairwise comparisons, so a single
  pass over the array serves any number of patterns of one length.

All counts are Python ints.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .core import UsageError, Word, _reduce, as_pattern, format_word

__all__ = [
    "COUNT_LIMIT",
    "PROFILE_LIMIT",
    "EnumerationLimitError",
    "CountTable",
    "OccurrenceProfile",
    "generate_all",
    "generate_avoiders",
    "refined_avoider_counts",
    "brute_count_avoiders",
    "brute_count_refined",
    "count_table",
    "sequences_array",
    "pattern_code",
    "window_codes",
    "occurrence_profiles",
    "occurrence_profile",
    "avoider_counts",
    "positions_key",
]

COUNT_LIMIT = 12
PROFILE_LIMIT = 8


class EnumerationLimitError(RuntimeError):
    """The requested length exceeds the configured enumeration limit."""


def _check_limit(n: int, limit: int | None) -> None:
    if n < 0:
        raise UsageError(f"length must be non-negative, got {n}")
    if limit is not None and n > limit:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration limit {limit}")


def generate_all(n: int, limit: int | None = COUNT_LIMIT) -> Iterator[Word]:
    """Yield every inversion sequence of length n, in lexicographic order."""
    _check_limit(n, limit)
    return product(*(range(i) for i in range(1, n + 1)))


def generate_avoiders(p: Sequence[int], n: int, limit: int | None = COUNT_LIMIT) -> Iterator[Word]:
    """Depth-first walk over I_n(p) in lexicographic order, pruning on the newest window."""
    p = as_pattern(p)
    _check_limit(n, limit)
    r = len(p)
    prefix: list[int] = []

    def walk(i: int) -> Iterator[Word]:
        if i > n:
            yield tuple(prefix)
            return
        for v in range(i):
            prefix.append(v)
            if not (i >= r and _reduce(tuple(prefix[i - r :])) == p):
                yield from walk(i + 1)
            prefix.pop()

    return walk(1)


def refined_avoider_counts(p: Sequence[int], n: int, limit: int | None = None) -> list[int]:
    """Return ``[|I_{n,0}(p)|, ..., |I_{n,n-1}(p)|]``.

    The search state after i entries is the tuple of the last r-1 entries;
    prefixes sharing that tail have identical futures, so their counts are
    merged instead of re-walked.
    """
    p = as_pattern(p)
    _check_limit(n, limit)
    if n == 0:
        return []
    r = len(p)
    keep = r - 1
    states: Counter[Word] = Counter({(): 1})
    for i in range(1, n + 1):
        nxt: Counter[Word] = Counter()
        for tail, count in states.items():
            for v in range(i):
                window = tail + (v,)
                if len(window) == r and _reduce(window) == p:
                    continue
                # the last entry is always kept so the final row can be split by e_n
                nxt[window[-max(keep, 1) :]] += count
        states = nxt
    row = [0] * n
    for tail, count in states.items():
        row[tail[-1]] += count
    return row


def brute_count_avoiders(p: Sequence[int], n: int, limit: int | None = COUNT_LIMIT) -> int:
    """|I_n(p)|, with the convention |I_0(p)| = 1."""
    if n == 0:
        return 1
    return sum(refined_avoider_counts(p, n, limit))


def brute_count_refined(p: Sequence[int], n: int, k: int, limit: int | None = COUNT_LIMIT) -> int:
    if n < 1:
        raise UsageError(f"refined counts need n >= 1, got {n}")
    if k < 0:
        raise UsageError(f"k must be non-negative, got {k}")
    if k >= n:
        as_pattern(p)
        return 0
    return refined_avoider_counts(p, n, limit)[k]


@dataclass
class CountTable:
    """Exact counts |I_{n,k}(p)| keyed by (n, k) plus totals |I_n(p)|."""

    pattern: Word
    method: str
    rows: dict[tuple[int, int], int] = field(default_factory=dict)
    totals: dict[int, int] = field(default_factory=lambda: {0: 1})

    @classmethod
    def from_rows(cls, pattern: Word, method: str, rows: dict[int, list[int]]) -> "CountTable":
        table = cls(tuple(pattern), method)
        for n, row in sorted(rows.items()):
            if len(row) != n:
                raise ValueError(f"row {n} has {len(row)} cells")
            for k, value in enumerate(row):
                table.rows[(n, k)] = value
            table.totals[n] = sum(row)
        return table

    @property
    def n_max(self) -> int:
        return max(self.totals)

    def cell(self, n: int, k: int) -> int:
        if k >= n or k < 0:
            return 0
        return self.rows[(n, k)]

    def row(self, n: int) -> list[int]:
        return [self.rows[(n, k)] for k in range(n)]

    def sequence(self, start: int = 1) -> list[int]:
        return [self.totals[n] for n in range(start, self.n_max + 1)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "k", "count"])
        for (n, k), value in sorted(self.rows.items()):
            writer.writerow([n, k, value])
        return buf.getvalue()

    def to_bfile(self, offset: int = 1) -> str:
        """OEIS b-file lines ``index value``; index ``offset`` holds |I_1(p)|."""
        lines = [f"{n - 1 + offset} {self.totals[n]}" for n in range(1, self.n_max + 1)]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "pattern": format_word(self.pattern),
            "method": self.method,
            "n_max": self.n_max,
            "totals": [self.totals[n] for n in range(1, self.n_max + 1)],
        }

    def digest(self) -> str:
        payload = json.dumps(sorted(self.rows.items()), separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def same_counts(self, other: "CountTable") -> bool:
        return self.rows == other.rows and self.totals == other.totals


def count_table(p: Sequence[int], n_max: int, limit: int | None = COUNT_LIMIT) -> CountTable:
    p = as_pattern(p)
    _check_limit(n_max, limit)
    rows = {n: refined_avoider_counts(p, n) for n in range(1, n_max + 1)}
    return CountTable.from_rows(p, "brute", rows)


# -- occurrence statistics -------------------------------------------------


def positions_key(positions: Sequence[int]) -> str:
    """Canonical text key of a position set: ``"3,5,8"``; the empty set is ``""``."""
    return ",".join(str(i) for i in sorted(positions))


@dataclass
class OccurrenceProfile:
    """Distribution of occurrences of one pattern over all of I_n.

    ``by_count[m]`` counts sequences with exactly m occurrences and
    ``by_set[key]`` counts sequences whose occurrence set has that key.
    """

    pattern: Word
    n: int
    by_count: dict[int, int]
    by_set: dict[str, int]

    @property
    def avoiders(self) -> int:
        return self.by_count.get(0, 0)

    def count_digest(self) -> str:
        return _digest(sorted(self.by_count.items()))

    def set_digest(self) -> str:
        return _digest(sorted(self.by_set.items()))


def _digest(items) -> str:
    payload = json.dumps(items, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _prefixes(depth: int) -> list[Word]:
    return list(product(*(range(i) for i in range(1, depth + 1))))


def sequences_array(n: int, prefix: Sequence[int] = ()) -> np.ndarray:
    """All of I_n that start with `prefix`, one row per sequence, lexicographic."""
    prefix = tuple(prefix)
    arr = np.array([prefix], dtype=np.int8).reshape(1, len(prefix))
    for i in range(len(prefix) + 1, n + 1):
        rows = arr.shape[0]
        arr = np.hstack(
            [np.repeat(arr, i, axis=0), np.tile(np.arange(i, dtype=np.int8), rows)[:, None]]
        )
    return arr


def pattern_code(word: Sequence[int]) -> int:
    """Base-3 code of the pairwise comparisons of `word`; equal iff reductions are equal."""
    code = 0
    for idx, (a, b) in enumerate(combinations(range(len(word)), 2)):
        cmp = (word[b] > word[a]) - (word[b] < word[a]) + 1
        code += cmp * 3**idx
    return code


def window_codes(arr: np.ndarray, r: int) -> np.ndarray:
    """Comparison codes of every length-r window: shape (rows, n - r + 1)."""
    rows, n = arr.shape
    width = max(n - r + 1, 0)
    out = np.zeros((rows, width), dtype=np.int32)
    if width == 0:
        return out
    x = arr.astype(np.int16)
    for idx, (a, b) in enumerate(combinations(range(r), 2)):
        diff = x[:, b : b + width] - x[:, a : a + width]
        out += (np.sign(diff).astype(np.int32) + 1) * 3**idx
    return out


def _profile_shard(args: tuple[tuple[Word, ...], int, Word]) -> dict[Word, Counter]:
    patterns, n, prefix = args
    arr = sequences_array(n, prefix)
    r = len(patterns[0])
    codes = window_codes(arr, r)
    result = {}
    for p in patterns:
        hits = codes == pattern_code(p)
        weights = np.left_shift(np.int64(1), np.arange(hits.shape[1], dtype=np.int64))
        masks = (hits.astype(np.int64) * weights).sum(axis=1) if hits.shape[1] else np.zeros(
            arr.shape[0], dtype=np.int64
        )
        values, counts = np.unique(masks, return_counts=True)
        result[p] = Counter({int(v): int(c) for v, c in zip(values, counts)})
    return result


def occurrence_profiles(
    patterns: Sequence[Sequence[int]],
    n: int,
    workers: int = 1,
    limit: int | None = PROFILE_LIMIT,
    split_depth: int = 3,
) -> dict[Word, OccurrenceProfile]:
    """Occurrence profiles of several same-length patterns over I_n.

    I_n is split by its first `split_depth` entries; shards may run in a
    process pool and their counters are summed, so the result does not
    depend on `workers`.
    """
    pats = tuple(as_pattern(p) for p in patterns)
    if not pats:
        return {}
    if len({len(p) for p in pats}) != 1:
        raise UsageError("patterns must all have the same length")
    _check_limit(n, limit)
    jobs = [(pats, n, prefix) for prefix in _prefixes(min(split_depth, n))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_profile_shard, jobs))
    else:
        parts = [_profile_shard(job) for job in jobs]
    merged: dict[Word, Counter] = {p: Counter() for p in pats}
    for part in parts:
        for p, counter in part.items():
            merged[p].update(counter)

    profiles = {}
    for p in pats:
        by_set: dict[str, int] = {}
        by_count: Counter[int] = Counter()
        for mask, c in sorted(merged[p].items()):
            positions = [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]
            by_set[positions_key(positions)] = c
            by_count[len(positions)] += c
        profiles[p] = OccurrenceProfile(p, n, dict(sorted(by_count.items())), by_set)
    return profiles


def occurrence_profile(
    p: Sequence[int], n: int, workers: int = 1, limit: int | None = PROFILE_LIMIT
) -> OccurrenceProfile:
    p = as_pattern(p)
    return occurrence_profiles([p], n, workers=workers, limit=limit)[p]


def avoider_counts(
    patterns: Sequence[Sequence[int]], n: int, limit: int | None = COUNT_LIMIT
) -> dict[Word, int]:
    """|I_n(p)| for several same-length patterns from one vectorised scan of I_n."""
    pats = [as_pattern(p) for p in patterns]
    if len({len(p) for p in pats}) > 1:
        raise UsageError("patterns must all have the same length")
    _check_limit(n, limit)
    if not pats:
        return {}
    if n < len(pats[0]):
        return {p: math.factorial(n) for p in pats}
    codes = window_codes(sequences_array(n), len(pats[0]))
    total = codes.shape[0]
    return {p: total - int(np.any(codes == pattern_code(p), axis=1).sum()) for p in pats}
