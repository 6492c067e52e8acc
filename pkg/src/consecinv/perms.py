"""
Permutations, the inversion-sequence encoding, and vincular patterns.

``theta`` sends a permutation (1-based values) to its inversion sequence,
``e_i = #{j < i : pi_j > pi_i}``.  Vincular patterns are written with
brackets around the entries that must be adjacent, e.g. ``"3[214]"`` or
``"[143]2"``; a fully bracketed ``"[321]"`` is a consecutive pattern.

>>> theta((2, 3, 1))
(0, 0, 2)
>>> contains_vincular((3, 2, 1, 4), VincularPattern.parse("3[214]"))
True
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .core import UsageError, Word, as_inversion_sequence, contains_consecutive
from .enumeration import brute_count_avoiders, generate_all

__all__ = [
    "VerificationError",
    "VincularPattern",
    "is_permutation",
    "theta",
    "theta_inverse",
    "reverse_complement",
    "descent_set",
    "ascent_set",
    "contains_vincular",
    "count_vincular_avoiders",
    "verify_descent_lemma",
    "verify_pattern_transport",
    "verify_theta_correspondences",
    "check_report",
    "round_trip_ok",
]


class VerificationError(AssertionError):
    """A numerical claim failed; ``witness`` carries the failing n or object."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def is_permutation(pi: Sequence[int]) -> bool:
    return sorted(pi) == list(range(1, len(pi) + 1))


def _as_permutation(pi: Iterable[int]) -> Word:
    pi = tuple(pi)
    if not is_permutation(pi):
        raise UsageError(f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def theta(pi: Sequence[int]) -> Word:
    pi = _as_permutation(pi)
    return tuple(sum(1 for j in range(i) if pi[j] > pi[i]) for i in range(len(pi)))


def theta_inverse(e: Sequence[int]) -> Word:
    """Rebuild the permutation right to left: pi_i has exactly e_i larger values before it."""
    e = as_inversion_sequence(e)
    remaining = list(range(1, len(e) + 1))
    pi = [0] * len(e)
    for i in range(len(e) - 1, -1, -1):
        pi[i] = remaining.pop(len(remaining) - 1 - e[i])
    return tuple(pi)


def reverse_complement(pi: Sequence[int]) -> Word:
    pi = _as_permutation(pi)
    n = len(pi)
    return tuple(n + 1 - v for v in reversed(pi))


def descent_set(pi: Sequence[int]) -> set[int]:
    return {i for i in range(1, len(pi)) if pi[i - 1] > pi[i]}


def ascent_set(e: Sequence[int]) -> set[int]:
    return {i for i in range(1, len(e)) if e[i - 1] < e[i]}


@dataclass(frozen=True)
class VincularPattern:
    """A permutation pattern with adjacency bonds.

    ``bonds`` holds 1-based i such that the entries matched to pattern
    positions i and i+1 must sit next to each other.
    """

    word: Word
    bonds: frozenset[int]

    def __post_init__(self):
        if not is_permutation(self.word):
            raise UsageError(f"vincular pattern word {self.word} is not a permutation")
        if not self.bonds <= set(range(1, len(self.word))):
            raise UsageError(f"bonds {sorted(self.bonds)} out of range")

    @classmethod
    def parse(cls, text: str) -> "VincularPattern":
        word: list[int] = []
        bonds: set[int] = set()
        group_start = None
        for ch in text.replace("_", ""):
            if ch == "[":
                if group_start is not None:
                    raise UsageError(f"nested brackets in {text!r}")
                group_start = len(word)
            elif ch == "]":
                if group_start is None:
                    raise UsageError(f"unbalanced brackets in {text!r}")
                bonds.update(range(group_start + 1, len(word)))
                group_start = None
            elif ch.isdigit():
                word.append(int(ch))
            else:
                raise UsageError(f"unexpected character {ch!r} in {text!r}")
        if group_start is not None:
            raise UsageError(f"unbalanced brackets in {text!r}")
        return cls(tuple(word), frozenset(bonds))

    @classmethod
    def consecutive(cls, word: Sequence[int]) -> "VincularPattern":
        return cls(tuple(word), frozenset(range(1, len(word))))

    def __str__(self) -> str:
        out = []
        for i, v in enumerate(self.word, start=1):
            if i in self.bonds and (i - 1) not in self.bonds:
                out.append("[")
            out.append(str(v))
            if (i - 1) in self.bonds and i not in self.bonds:
                out.append("]")
        return "".join(out)


def contains_vincular(pi: Sequence[int], vp: VincularPattern) -> bool:
    """True iff pi has an occurrence of vp respecting all of its adjacency bonds.

    Positions are filled left to right; a bonded position is forced to the
    index right after its predecessor, and every candidate must agree with
    the pattern on its order relative to the entries already chosen.
    """
    pi = tuple(pi)
    sigma = vp.word
    s, n = len(sigma), len(pi)
    chosen: list[int] = []

    def extend(t: int, start: int) -> bool:
        if t == s:
            return True
        if t > 0 and t in vp.bonds:
            candidates: Iterable[int] = (chosen[-1] + 1,) if chosen[-1] + 1 < n else ()
        else:
            candidates = range(start, n - (s - t) + 1)
        for i in candidates:
            v = pi[i]
            if all((v > pi[c]) == (sigma[t] > sigma[u]) for u, c in enumerate(chosen)):
                chosen.append(i)
                if extend(t + 1, i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0, 0)


def count_vincular_avoiders(vp: VincularPattern, n: int) -> int:
    return sum(1 for pi in permutations(range(1, n + 1)) if not contains_vincular(pi, vp))


def verify_descent_lemma(n: int) -> bool:
    """Descents of pi are exactly the ascents of theta(pi), for every pi in S_n."""
    if n > 8:
        raise UsageError("exhaustive check is limited to n <= 8")
    return all(descent_set(pi) == ascent_set(theta(pi)) for pi in permutations(range(1, n + 1)))


def verify_pattern_transport(r: int, n: int) -> bool:
    """pi contains [(r+1) r ... 1] iff theta(pi) contains the consecutive pattern 01...r."""
    decreasing = VincularPattern.consecutive(tuple(range(r + 1, 0, -1)))
    increasing = tuple(range(r + 1))
    return all(
        contains_vincular(pi, decreasing) == contains_consecutive(theta(pi), increasing)
        for pi in permutations(range(1, n + 1))
    )


def _record(claim: str, n: int, lhs: int, rhs: int) -> dict:
    return {"claim": claim, "n": n, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs}


def verify_theta_correspondences(n_max: int, r_max: int = 4) -> list[dict]:
    """Numerical check of the correspondences between inversion-sequence and permutation patterns.

    Returns one record ``{claim, n, lhs, rhs, ok}`` per claim and n.  The
    inversion-sequence side is counted on I_n, the permutation side on S_n;
    neither goes through theta.
    """
    if n_max > 8:
        raise UsageError("permutation-side verification is limited to n <= 8")
    vp = VincularPattern.parse
    chains: list[tuple[str, Word, list[str]]] = [
        ("I(021) = S(2[413]) = S([241]3) = S([231]4) = S([132]4)", (0, 2, 1),
         ["2[413]", "[241]3", "[231]4", "[132]4"]),
        ("I(120) = S(3[214]) = S([143]2)", (1, 2, 0), ["3[214]", "[143]2"]),
    ]
    for r in range(2, r_max + 1):
        inc = tuple(range(r + 1))
        dec = "[" + "".join(str(v) for v in range(r + 1, 0, -1)) + "]"
        chains.insert(r - 2, (f"I({''.join(map(str, inc))}) = S({dec})", inc, [dec]))

    records = []
    for claim, p, vincular in chains:
        patterns = [vp(text) for text in vincular]
        for n in range(1, n_max + 1):
            lhs = brute_count_avoiders(p, n)
            for text, pattern in zip(vincular, patterns):
                rhs = count_vincular_avoiders(pattern, n)
                records.append(_record(f"{claim} :: S({text})", n, lhs, rhs))
    return records


def check_report(records: list[dict]) -> list[dict]:
    """Raise VerificationError at the first failing record; return records otherwise."""
    for rec in records:
        if not rec["ok"]:
            raise VerificationError(f"{rec['claim']} fails at n={rec['n']}", witness=rec["n"])
    return records


def round_trip_ok(n: int) -> bool:
    """theta and theta_inverse are mutually inverse on S_n and I_n."""
    return all(theta_inverse(theta(pi)) == pi for pi in permutations(range(1, n + 1))) and all(
        theta(theta_inverse(e)) == e for e in generate_all(n)
    )
