"""
Words, reductions and pattern occurrences.

Inversion sequences and patterns are plain tuples of ints.  Positions of
occurrences are 1-based, so ``find_occurrences((0, 0, 2, 1, 1), (1, 0, 0))``
is ``[3]``: the window starting at the third entry.

>>> reduce_word((2, 2, 1))
(1, 1, 0)
>>> find_occurrences(parse_word("0021100300"), (1, 0, 0))
[3, 5, 8]
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

__all__ = [
    "UsageError",
    "Word",
    "reduce_word",
    "is_reduced",
    "is_inversion_sequence",
    "as_inversion_sequence",
    "as_pattern",
    "parse_word",
    "format_word",
    "find_occurrences",
    "contains_consecutive",
    "contains_classical",
    "enumerate_patterns",
]

Word = tuple[int, ...]


class UsageError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


def reduce_word(word: Iterable[int]) -> Word:
    """Replace the i-th smallest distinct value of `word` by i-1."""
    word = tuple(word)
    if not word:
        raise UsageError("cannot reduce an empty word")
    return _reduce(word)


@lru_cache(maxsize=1 << 16)
def _reduce(word: Word) -> Word:
    rank = {v: i for i, v in enumerate(sorted(set(word)))}
    return tuple(rank[v] for v in word)


def is_reduced(word: Sequence[int]) -> bool:
    return len(word) > 0 and tuple(word) == _reduce(tuple(word))


def is_inversion_sequence(word: Sequence[int]) -> bool:
    """True iff ``0 <= word[i] < i`` for every 1-based position i."""
    return all(isinstance(v, int) and 0 <= v < i for i, v in enumerate(word, start=1))


def as_inversion_sequence(word: Iterable[int] | str) -> Word:
    e = parse_word(word) if isinstance(word, str) else tuple(word)
    if not is_inversion_sequence(e):
        raise UsageError(f"{format_word(e)} is not an inversion sequence")
    return e


def as_pattern(word: Iterable[int] | str) -> Word:
    """Validate a consecutive pattern; non-canonical words are rejected, not reduced."""
    p = parse_word(word) if isinstance(word, str) else tuple(word)
    if not p:
        raise UsageError("empty pattern")
    if any(not isinstance(v, int) or v < 0 for v in p):
        raise UsageError(f"pattern letters must be non-negative integers: {p}")
    if not is_reduced(p):
        raise UsageError(
            f"pattern {format_word(p)} is not reduced (its reduction is {format_word(_reduce(p))})"
        )
    return p


def parse_word(text: str) -> Word:
    """Parse ``"0021"`` or ``"0,0,12,1"``; the comma form is needed for letters above 9.

    A single letter above 9 is written with a trailing comma, ``"12,"``.
    """
    text = text.strip()
    if not text:
        return ()
    try:
        if "," in text:
            parts = text.split(",")
            if parts[-1] == "" and len(parts) == 2:
                parts.pop()
            return tuple(int(part) for part in parts)
        return tuple(int(ch) for ch in text)
    except ValueError:
        raise UsageError(f"cannot parse word {text!r}") from None


def format_word(word: Sequence[int]) -> str:
    if all(0 <= v <= 9 for v in word):
        return "".join(str(v) for v in word)
    if len(word) == 1:
        return f"{word[0]},"
    return ",".join(str(v) for v in word)


def find_occurrences(e: Sequence[int], p: Sequence[int]) -> list[int]:
    """Return Em(p, e), the sorted 1-based start positions of occurrences of p in e."""
    p = tuple(p)
    r = len(p)
    if r == 0:
        raise UsageError("empty pattern")
    e = tuple(e)
    return [i + 1 for i in range(len(e) - r + 1) if _reduce(e[i : i + r]) == p]


def contains_consecutive(e: Sequence[int], p: Sequence[int]) -> bool:
    p = tuple(p)
    r = len(p)
    e = tuple(e)
    return any(_reduce(e[i : i + r]) == p for i in range(len(e) - r + 1))


def contains_classical(e: Sequence[int], p: Sequence[int]) -> bool:
    """True iff some (not necessarily adjacent) subsequence of e reduces to p.

    Backtracking over index choices.  Each new entry must agree with the
    pattern on its order relation to every entry already chosen, and a
    branch is dropped when too few positions remain.
    """
    p = as_pattern(p)
    e = tuple(e)
    r, n = len(p), len(e)
    chosen: list[int] = []

    def extend(start: int) -> bool:
        t = len(chosen)
        if t == r:
            return True
        for i in range(start, n - (r - t) + 1):
            v = e[i]
            if all(
                (v > e[c]) == (p[t] > p[s]) and (v == e[c]) == (p[t] == p[s])
                for s, c in enumerate(chosen)
            ):
                chosen.append(i)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0)


def enumerate_patterns(r: int) -> list[Word]:
    """All consecutive patterns of length r in lexicographic order (1, 3, 13, 75, ... of them)."""
    if not 1 <= r <= 6:
        raise UsageError(f"pattern length must be between 1 and 6, got {r}")
    return [w for w in product(range(r), repeat=r) if _reduce(w) == w]
