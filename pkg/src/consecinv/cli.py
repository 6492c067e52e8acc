"""
Command-line interface: ``consecinv count|sequence|classify|verify``.

Exit codes are 0 on success, 1 when a verification fails and 2 on a usage
error.  Options can also come from a ``key=value`` file given with
``--config``; flags on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .core import UsageError, as_pattern, enumerate_patterns, format_word
from .enumeration import (
    COUNT_LIMIT,
    EnumerationLimitError,
    brute_count_avoiders,
    brute_count_refined,
    occurrence_profiles,
)
from .equivalence import (
    LENGTH4_GROUPS,
    LEVELS,
    classify,
    extension_correspondence,
    verify_block_maps,
    verify_changeability,
    verify_switch,
)
from .perms import (
    VerificationError,
    verify_descent_lemma,
    verify_pattern_transport,
    verify_theta_correspondences,
)
from .recurrences import (
    LENGTH3_PATTERNS,
    derangement_identity_check,
    rec_count_000,
    rec_count_zeros,
    rec_table_012_fast,
    rec_table_210_fast,
    rec_table_len3,
)
from .tables import KNOWN_LENGTH3

MAX_PATTERN_LENGTH = 6
METHODS = ("brute", "recurrence", "fast")


# -- helpers -------------------------------------------------------------------


def _pattern(text: str | None):
    if not text:
        raise UsageError("--pattern is required")
    p = as_pattern(text)
    if len(p) > MAX_PATTERN_LENGTH:
        raise UsageError(f"patterns longer than {MAX_PATTERN_LENGTH} are not supported")
    return p


def _required(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _has_recurrence(p) -> bool:
    return len(p) == 3 or (len(p) >= 2 and not any(p))


def _recurrence_table(p, n_max: int, method: str):
    if method == "fast":
        if p == (0, 1, 2):
            return rec_table_012_fast(n_max)
        if p == (2, 1, 0):
            return rec_table_210_fast(n_max)
        raise UsageError("--method fast only covers 012 and 210")
    if len(p) == 3:
        return rec_table_len3(p, n_max)
    return None


def _recurrence_totals(p, n_max: int, method: str) -> list[int]:
    if not _has_recurrence(p) and method == "recurrence":
        raise UsageError(f"no recurrence for {format_word(p)}: use --method brute")
    table = _recurrence_table(p, n_max, method)
    if table is not None:
        return table.sequence()
    return [rec_count_zeros(len(p), n) for n in range(1, n_max + 1)]


def _brute_totals(p, n_max: int, limit: int) -> list[int]:
    return [brute_count_avoiders(p, n, limit) for n in range(1, n_max + 1)]


def _stamp(args) -> str | None:
    return datetime.now(timezone.utc).isoformat(timespec="seconds") if args.timestamp else None


def _emit_json(payload: dict, args) -> None:
    stamp = _stamp(args)
    if stamp:
        payload = {**payload, "generated_at": stamp}
    print(json.dumps(payload, indent=2))


def _emit_text(text: str, args) -> None:
    stamp = _stamp(args)
    if stamp:
        print(f"# generated {stamp}")
    print(text, end="" if text.endswith("\n") else "\n")


# -- commands ------------------------------------------------------------------


def cmd_count(args) -> int:
    p = _pattern(args.pattern)
    n = _required(args.n, "--n")
    if n < 0:
        raise UsageError(f"--n must be non-negative, got {n}")
    k = args.refine
    if args.method == "brute" or n == 0:
        value = brute_count_avoiders(p, n, args.limit) if k is None else brute_count_refined(p, n, k, args.limit)
    else:
        if k is not None:
            table = _recurrence_table(p, n, args.method)
            if table is None:
                raise UsageError(f"refined counts need a length-3 pattern, got {format_word(p)}")
            value = table.cell(n, k)
        else:
            value = _recurrence_totals(p, n, args.method)[-1]
    if args.check:
        if not _has_recurrence(p):
            raise UsageError(f"--check needs a pattern with a recurrence, got {format_word(p)}")
        if k is None:
            brute = brute_count_avoiders(p, n, args.limit)
            rec = _recurrence_totals(p, n, "recurrence")[-1] if n else 1
        else:
            brute = brute_count_refined(p, n, k, args.limit)
            table = _recurrence_table(p, n, "recurrence")
            if table is None:
                raise UsageError("refined counts need a length-3 pattern")
            rec = table.cell(n, k)
        if brute != rec:
            print(f"mismatch: brute {brute} != recurrence {rec}", file=sys.stderr)
            return 1
    if args.format == "json":
        payload = {"pattern": format_word(p), "n": n, "method": args.method, "count": value}
        if k is not None:
            payload["k"] = k
        _emit_json(payload, args)
    else:
        _emit_text(str(value), args)
    return 0


def cmd_sequence(args) -> int:
    p = _pattern(args.pattern)
    n_max = _required(args.n_max, "--n-max")
    if n_max < 1:
        raise UsageError(f"--n-max must be at least 1, got {n_max}")
    if args.method == "brute":
        values = _brute_totals(p, n_max, args.limit)
    else:
        values = _recurrence_totals(p, n_max, args.method)
    if args.check:
        if not _has_recurrence(p):
            raise UsageError(f"--check needs a pattern with a recurrence, got {format_word(p)}")
        brute = _brute_totals(p, n_max, args.limit)
        rec = _recurrence_totals(p, n_max, "recurrence")
        bad = next((n for n, (a, b) in enumerate(zip(brute, rec), start=1) if a != b), None)
        if bad is not None:
            print(f"mismatch at n={bad}: brute {brute[bad - 1]} != recurrence {rec[bad - 1]}", file=sys.stderr)
            return 1
    indices = range(args.offset, args.offset + n_max)
    if args.format == "json":
        _emit_json(
            {"pattern": format_word(p), "method": args.method, "offset": args.offset, "values": values},
            args,
        )
    elif args.format == "csv":
        _emit_text("n,count\n" + "".join(f"{i},{v}\n" for i, v in zip(indices, values)), args)
    elif args.format == "bfile":
        _emit_text("".join(f"{i} {v}\n" for i, v in zip(indices, values)), args)
    else:
        _emit_text(" ".join(str(v) for v in values), args)
    return 0


def cmd_classify(args) -> int:
    n_max = _required(args.n_max, "--n-max")
    if args.patterns:
        patterns = [_pattern(t) for t in args.patterns.replace(",", " ").split()]
    else:
        length = _required(args.length, "--length or --patterns")
        if length > MAX_PATTERN_LENGTH:
            raise UsageError(f"patterns longer than {MAX_PATTERN_LENGTH} are not supported")
        patterns = enumerate_patterns(length)
    partition = classify(patterns, n_max, args.level, workers=args.workers, limit=args.limit)
    _emit_json(partition.to_dict(), args)
    return 0


# -- verification suites --------------------------------------------------------


def _claim(claim: str, ok: bool, **detail) -> dict:
    return {"claim": claim, "ok": bool(ok), **detail}


def suite_tables(args) -> list[dict]:
    out = []
    for p in LENGTH3_PATTERNS:
        expected = list(KNOWN_LENGTH3[p])
        brute = _brute_totals(p, 8, COUNT_LIMIT)
        rec = rec_table_len3(p, 8).sequence()
        out.append(_claim(f"|I_n({format_word(p)})|, n=1..8", brute == expected == rec,
                          expected=expected, brute=brute, recurrence=rec))
    return out


def suite_recurrences(args) -> list[dict]:
    n_max = args.n_max or 8
    out = []
    for p in LENGTH3_PATTERNS:
        table = rec_table_len3(p, n_max)
        bad = [
            (n, k)
            for n in range(1, n_max + 1)
            for k in range(n)
            if table.cell(n, k) != brute_count_refined(p, n, k, None)
        ]
        out.append(_claim(f"refined recurrence {format_word(p)} = brute, n<={n_max}", not bad, mismatches=bad))
    for p, fast in (((0, 1, 2), rec_table_012_fast), ((2, 1, 0), rec_table_210_fast)):
        ok = fast(30).rows == rec_table_len3(p, 30).rows
        out.append(_claim(f"collapsed {format_word(p)} recurrence = triple sum, n<=30", ok))
    ok = all(rec_count_zeros(3, n) == rec_count_000(n) for n in range(1, 21))
    out.append(_claim("|I_n(0^3)| general = 000 recurrence, n<=20", ok))
    for r in (2, 3, 4):
        zeros = (0,) * r
        ok = all(rec_count_zeros(r, n) == brute_count_avoiders(zeros, n) for n in range(1, 9))
        out.append(_claim(f"|I_n(0^{r})| recurrence = brute, n<=8", ok))
    return out


def suite_length4(args) -> list[dict]:
    wilf_n = args.n_max or 11
    out = []
    patterns = sorted({p for g in LENGTH4_GROUPS for p in g})
    digests: dict = {p: [] for p in patterns}
    for n in range(1, 9):
        profiles = occurrence_profiles(patterns, n, workers=args.workers)
        for p in patterns:
            digests[p].append(profiles[p].set_digest())
    for group in LENGTH4_GROUPS:
        ok = len({tuple(digests[p]) for p in group}) == 1
        out.append(_claim("superstrong " + "~".join(format_word(p) for p in group) + ", n<=8", ok))
    partition = classify(enumerate_patterns(4), wilf_n, "wilf", limit=max(wilf_n, 10))
    merged = sorted(tuple(c) for c in partition.merged())
    extra = [[format_word(p) for p in c] for c in merged if c not in LENGTH4_GROUPS]
    out.append(_claim(
        f"no Wilf equivalences beyond the 14 groups at n<={wilf_n}",
        merged == sorted(LENGTH4_GROUPS),
        num_classes=len(partition.classes),
        extra_merges=extra,
    ))
    return out


def suite_permutations(args) -> list[dict]:
    n_max = args.n_max or 8
    out = [
        _claim(f"{rec['claim']}, n={rec['n']}", rec["ok"], lhs=rec["lhs"], rhs=rec["rhs"])
        for rec in verify_theta_correspondences(n_max, r_max=4)
    ]
    out.append(_claim("Des(pi) = Asc(theta(pi)) on S_7", verify_descent_lemma(7)))
    for r in (2, 3):
        out.append(_claim(f"pi contains [{r + 1}..1] iff theta(pi) contains 0..{r}, S_7",
                          verify_pattern_transport(r, 7)))
    return out


def suite_derangements(args) -> list[dict]:
    n_max = args.n_max or 20
    return [
        _claim(f"{n}|I_{n}(000)| = {n + 1}! - d_{n + 1}", derangement_identity_check(n))
        for n in range(1, n_max + 1)
    ]


def _passes(fn: Callable[[], int]) -> tuple[bool, str]:
    try:
        return True, str(fn())
    except VerificationError as exc:
        return False, str(exc)


def suite_bijections(args) -> list[dict]:
    n_max = args.n_max or 9
    checks = [
        ("switch 0021 <-> 0121 is an involution exchanging occurrences on I_7",
         lambda: verify_switch((0, 0, 2, 1), (0, 1, 2, 1), 7)),
        ("changeability verdicts match changes on I_7, length 3", lambda: verify_changeability(3)),
        ("changeability verdicts match changes on I_7, length 4", lambda: verify_changeability(4)),
        (f"0102 <-> 0112 block map round trip on I_{n_max}", lambda: verify_block_maps(n_max, "A")),
        (f"2010 <-> 2110 block map round trip on I_{n_max}", lambda: verify_block_maps(n_max, "B", target="B3")),
        (f"2010 <-> 2120 block map round trip on I_{n_max}", lambda: verify_block_maps(n_max, "B", target="B2")),
        ("extension pairs superstrong at n<=8", lambda: len(extension_correspondence(8))),
    ]
    out = []
    for claim, fn in checks:
        ok, detail = _passes(fn)
        out.append(_claim(claim, ok, detail=detail))
    return out


SUITES: dict[str, Callable] = {
    "tables3and4": suite_tables,
    "recurrences-vs-brute": suite_recurrences,
    "theorem-length4": suite_length4,
    "permutation-correspondences": suite_permutations,
    "derangement-identity": suite_derangements,
    "bijections": suite_bijections,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    report = {}
    failed = None
    for name in names:
        claims = SUITES[name](args)
        report[name] = {"passed": all(c["ok"] for c in claims), "claims": claims}
        if failed is None:
            failed = next((c for c in claims if not c["ok"]), None)
    _emit_json({"passed": failed is None, "suites": report}, args)
    if failed is not None:
        print(f"verification failed: {failed['claim']}", file=sys.stderr)
        return 1
    return 0


# -- argument parsing ------------------------------------------------------------


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value file with default options")
    common.add_argument("--timestamp", action="store_true", help="stamp output with the current UTC time")

    parser = argparse.ArgumentParser(
        prog="consecinv", description="Inversion sequences avoiding consecutive patterns."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", parents=[common], help="print |I_n(p)| or |I_{n,k}(p)|")
    count.add_argument("--pattern")
    count.add_argument("--n", type=int)
    count.add_argument("--method", choices=METHODS, default="brute")
    count.add_argument("--refine", type=_non_negative, metavar="K", help="count sequences ending in K")
    count.add_argument("--check", action="store_true", help="cross-check brute force against the recurrence")
    count.add_argument("--format", choices=("text", "json"), default="text")
    count.add_argument("--limit", type=int, default=COUNT_LIMIT, help="largest n for brute force")
    count.set_defaults(handler=cmd_count)

    seq = sub.add_parser("sequence", parents=[common], help="print |I_n(p)| for n = 1..n_max")
    seq.add_argument("--pattern")
    seq.add_argument("--n-max", type=int)
    seq.add_argument("--method", choices=METHODS, default="brute")
    seq.add_argument("--check", action="store_true")
    seq.add_argument("--format", choices=("text", "csv", "json", "bfile"), default="text")
    seq.add_argument("--offset", type=int, default=1, help="index of the first term (b-file, csv)")
    seq.add_argument("--limit", type=int, default=COUNT_LIMIT)
    seq.set_defaults(handler=cmd_sequence)

    cls = sub.add_parser("classify", parents=[common], help="partition patterns into equivalence classes")
    cls.add_argument("--length", type=int)
    cls.add_argument("--patterns", help="comma- or space-separated patterns of one length")
    cls.add_argument("--n-max", type=int)
    cls.add_argument("--level", choices=LEVELS, default="wilf")
    cls.add_argument("--workers", type=int, default=1)
    cls.add_argument("--limit", type=int, help="override the largest allowed n-max")
    cls.set_defaults(handler=cmd_classify)

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", choices=[*SUITES, "all"])
    ver.add_argument("--n-max", type=int, help="override the suite's largest n")
    ver.add_argument("--workers", type=int, default=1)
    ver.set_defaults(handler=cmd_verify)

    parser._subparser_map = sub.choices  # used to apply config-file defaults
    return parser


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def read_config(path: Path) -> dict[str, str]:
    values = {}
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_config(sub: argparse.ArgumentParser, config: dict[str, str]) -> None:
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in config.items():
        action = actions.get(key)
        if action is None or key in ("config", "help", "handler"):
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            lowered = value.lower()
            if lowered not in _TRUE | _FALSE:
                raise UsageError(f"config key {key!r} expects a boolean, got {value!r}")
            defaults[key] = lowered in _TRUE
        else:
            converted = action.type(value) if action.type else value
            if action.choices and converted not in action.choices:
                raise UsageError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
            defaults[key] = converted
    sub.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config is not None:
            _apply_config(parser._subparser_map[args.command], read_config(args.config))
            args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:  # argparse: --help is 0, bad arguments 2
        return exc.code if isinstance(exc.code, int) else 2
    except (UsageError, EnumerationLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
