"""
Closed recurrences for inversion sequences avoiding a consecutive pattern.

Every length-3 pattern gets a recurrence for the refined counts
|I_{n,k}(p)| (sequences of length n ending in k) in terms of |I_{n-1}(p)|
and rows n-2 or n-3 of the same table.  Tables are filled bottom-up; the
conventions |I_0(p)| = 1 and |I_{m,j}(p)| = 0 for m <= 0 are table lookups.

>>> rec_table_len3((1, 1, 0), 8).sequence()
[1, 2, 6, 23, 109, 618, 4098, 31173]
>>> rec_count_000(8)
28673
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .core import UsageError, Word, as_pattern, format_word
from .enumeration import CountTable

__all__ = [
    "N_MAX_CEILING",
    "LENGTH3_PATTERNS",
    "RecurrenceEngine",
    "rec_count_000",
    "rec_count_zeros",
    "derangements",
    "derangement_identity_check",
    "rec_table_len3",
    "rec_table_012_fast",
    "rec_table_210_fast",
    "recurrence_count",
]

N_MAX_CEILING = 200

LENGTH3_PATTERNS: tuple[Word, ...] = (
    (0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2), (0, 2, 1), (1, 0, 0),
    (1, 0, 1), (1, 0, 2), (1, 1, 0), (1, 2, 0), (2, 0, 1), (2, 1, 0),
)

# |I_{n,k}(012)| for n <= 3, stated explicitly alongside its recurrence
SEEDS_012 = {(1, 0): 1, (2, 0): 1, (2, 1): 1, (3, 0): 2, (3, 1): 2, (3, 2): 1}


def _check_n_max(n_max: int, ceiling: int | None) -> None:
    if n_max < 1:
        raise UsageError(f"n_max must be at least 1, got {n_max}")
    if ceiling is not None and n_max > ceiling:
        raise UsageError(f"n_max={n_max} exceeds the ceiling {ceiling}")


def rec_count_000(n: int) -> int:
    """|I_n(000)| from ``a_n = (n-1) a_{n-1} + (n-2) a_{n-2}``, a_1 = 1, a_2 = 2."""
    if n < 1:
        raise UsageError(f"n must be at least 1, got {n}")
    a, b = 1, 2
    if n == 1:
        return a
    for m in range(3, n + 1):
        a, b = b, (m - 1) * b + (m - 2) * a
    return b


def rec_count_zeros(r: int, n: int) -> int:
    """|I_n(0^r)| = sum_{j=1}^{r-1} (n-j) |I_{n-j}(0^r)|, with n! below length r."""
    if r < 2:
        raise UsageError(f"the all-zero pattern needs r >= 2, got {r}")
    if n < 1:
        raise UsageError(f"n must be at least 1, got {n}")
    values = [0] * (n + 1)
    for m in range(1, n + 1):
        if m < r:
            values[m] = math.factorial(m)
        else:
            values[m] = sum((m - j) * values[m - j] for j in range(1, r))
    return values[n]


def derangements(n_max: int) -> list[int]:
    """``d[0..n_max]`` with d_0 = 1, d_1 = 0 and d_n = (n-1)(d_{n-1} + d_{n-2})."""
    d = [1, 0]
    for n in range(2, n_max + 1):
        d.append((n - 1) * (d[n - 1] + d[n - 2]))
    return d[: n_max + 1]


def derangement_identity_check(n: int) -> bool:
    """Check ``n |I_n(000)| == (n+1)! - d_{n+1}``."""
    if n < 1:
        raise UsageError(f"n must be at least 1, got {n}")
    d = derangements(n + 1)
    return n * rec_count_000(n) == math.factorial(n + 1) - d[n + 1]


class RecurrenceEngine:
    """Bottom-up, memoised evaluation of one cell rule over (n, k)."""

    def __init__(self, pattern: Word, rule: Callable, seeds: dict | None = None, method="recurrence"):
        self.pattern = pattern
        self.rule = rule
        self.seeds = seeds or {}
        self.method = method
        self.rows: list[list[int]] = [[]]
        self.totals: list[int] = [1]
        self._prefix: list[list[int]] = [[0]]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def total(self, m: int) -> int:
        return self.totals[m] if m >= 0 else 0

    def cell(self, m: int, j: int) -> int:
        if m <= 0 or j < 0 or j >= m:
            return 0
        return self.rows[m][j]

    def range_sum(self, m: int, lo: int, hi: int) -> int:
        """Sum of cell(m, j) for lo <= j <= hi, clipped to the row."""
        if m <= 0:
            return 0
        lo, hi = max(lo, 0), min(hi, m - 1)
        if hi < lo:
            return 0
        pre = self._prefix[m]
        return pre[hi + 1] - pre[lo]

    def extend(self, n_max: int) -> "RecurrenceEngine":
        for n in range(self.n_max + 1, n_max + 1):
            row = [
                self.seeds[(n, k)] if (n, k) in self.seeds else self.rule(self, n, k)
                for k in range(n)
            ]
            self.rows.append(row)
            self.totals.append(sum(row))
            pre = [0]
            for v in row:
                pre.append(pre[-1] + v)
            self._prefix.append(pre)
        return self

    def table(self) -> CountTable:
        return CountTable.from_rows(
            self.pattern, self.method, {n: list(self.rows[n]) for n in range(1, self.n_max + 1)}
        )


# -- cell rules; each returns |I_{n,k}(p)| for n >= 1, 0 <= k < n ----------


def _rule_000(E, n, k):
    # split on whether e_{n-1} = e_n: the last two entries differ, or they
    # are equal and e_{n-2} differs from them
    same = E.total(n - 2) - E.cell(n - 2, k) if k <= n - 2 else 0
    return E.total(n - 1) - E.cell(n - 1, k) + same


def _rule_001(E, n, k):
    return E.total(n - 1) - E.range_sum(n - 2, 0, k - 1)


def _rule_010(E, n, k):
    return E.total(n - 1) - (n - 2 - k) * E.cell(n - 2, k)


def _rule_011(E, n, k):
    if k == n - 1:
        return E.total(n - 1)
    return E.total(n - 1) - E.range_sum(n - 2, 0, k - 1)


def _rule_100(E, n, k):
    return E.total(n - 1) - E.range_sum(n - 2, k + 1, n - 3)


def _rule_101(E, n, k):
    return E.total(n - 1) - k * E.cell(n - 2, k)


def _rule_021(E, n, k):
    if k == n - 1:
        return E.total(n - 1)
    return E.total(n - 1) - (n - 2 - k) * E.range_sum(n - 2, 0, k - 1)


def _rule_102(E, n, k):
    return E.total(n - 1) - sum(j * E.cell(n - 2, j) for j in range(1, k))


def _rule_120(E, n, k):
    return E.total(n - 1) - sum((n - 2 - j) * E.cell(n - 2, j) for j in range(k + 1, n - 2))


def _rule_201(E, n, k):
    return E.total(n - 1) - k * E.range_sum(n - 2, k + 1, n - 3)


def _rule_012(E, n, k):
    excluded = 0
    for l in range(1, k):
        for j in range(l):
            excluded += E.range_sum(n - 3, j, n - 4)
    return E.total(n - 1) - excluded


def _rule_210(E, n, k):
    excluded = 0
    for l in range(k + 1, n - 3):
        for j in range(l + 1, n - 2):
            excluded += E.range_sum(n - 3, 0, j)
    return E.total(n - 1) - excluded


def _rule_012_fast(E, n, k):
    weighted = sum((i + 1) * (2 * k - 2 - i) // 2 * E.cell(n - 3, i) for i in range(k - 2))
    tail = k * (k - 1) // 2 * E.range_sum(n - 3, k - 2, n - 4)
    return E.total(n - 1) - weighted - tail


def _rule_210_fast(E, n, k):
    if n <= 4 or k > n - 5:
        return E.total(n - 1)
    twice = (n - k - 4) * (n - k - 3) * E.range_sum(n - 3, 0, k + 2)
    twice += sum(
        (n - i - 2) * (n + i - 2 * k - 5) * E.cell(n - 3, i) for i in range(k + 3, n - 3)
    )
    half, odd = divmod(twice, 2)
    assert not odd, "collapsed 210 sum must be even"
    return E.total(n - 1) - half


_RULES: dict[Word, Callable] = {
    (0, 0, 0): _rule_000,
    (0, 0, 1): _rule_001,
    (0, 1, 0): _rule_010,
    (0, 1, 1): _rule_011,
    (0, 1, 2): _rule_012,
    (0, 2, 1): _rule_021,
    (1, 0, 0): _rule_100,
    (1, 0, 1): _rule_101,
    (1, 0, 2): _rule_102,
    (1, 1, 0): _rule_100,
    (1, 2, 0): _rule_120,
    (2, 0, 1): _rule_201,
    (2, 1, 0): _rule_210,
}


def rec_table_len3(p: Sequence[int], n_max: int, ceiling: int | None = N_MAX_CEILING) -> CountTable:
    """Full table |I_{n,k}(p)|, 1 <= n <= n_max, from the pattern's own recurrence."""
    p = as_pattern(p)
    if p not in _RULES:
        raise UsageError(f"no length-3 recurrence for pattern {format_word(p)}")
    _check_n_max(n_max, ceiling)
    seeds = SEEDS_012 if p == (0, 1, 2) else None
    return RecurrenceEngine(p, _RULES[p], seeds).extend(n_max).table()


def rec_table_012_fast(n_max: int, ceiling: int | None = N_MAX_CEILING) -> CountTable:
    _check_n_max(n_max, ceiling)
    return RecurrenceEngine((0, 1, 2), _rule_012_fast, SEEDS_012, "fast").extend(n_max).table()


def rec_table_210_fast(n_max: int, ceiling: int | None = N_MAX_CEILING) -> CountTable:
    _check_n_max(n_max, ceiling)
    return RecurrenceEngine((2, 1, 0), _rule_210_fast, None, "fast").extend(n_max).table()


def recurrence_count(p: Sequence[int], n: int, method: str = "recurrence") -> int:
    """|I_n(p)| for a pattern with a known recurrence (length 3, or all zeros)."""
    p = as_pattern(p)
    if n == 0:
        return 1
    if method == "fast":
        if p == (0, 1, 2):
            return rec_table_012_fast(n).totals[n]
        if p == (2, 1, 0):
            return rec_table_210_fast(n).totals[n]
        raise UsageError("the fast method only covers 012 and 210")
    if len(p) == 3:
        return rec_table_len3(p, n).totals[n]
    if len(p) >= 2 and not any(p):
        return rec_count_zeros(len(p), n)
    raise UsageError(f"no recurrence for pattern {format_word(p)}")
