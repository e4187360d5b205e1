"""Command-line interface.

Exit codes: 0 success, 1 domain error (or a lemma check with failures),
2 usage error, 3 budget refusal.  Results go to stdout or ``--out``;
diagnostics and the optional timing line go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import census
from .combinatorics import format_subset
from .errors import BudgetExceeded, DomainError
from .johnson import (
    JohnsonParams,
    count_invariant_stable_sets,
    count_stable_sets,
    format_stable_set,
    iter_invariant_stable_sets,
    iter_stable_sets,
)
from .matroid import automorphism_classification, automorphism_group, load, reconstruct_from_minors, to_json
from .permgroup import Permutation

FORMATS = ("csv", "json-lines", "plain")
KINDS = {"sparse": census.SPARSE, "all": census.ALL}


class UsageError(Exception):
    pass


def _global_parent(suppress: bool) -> argparse.ArgumentParser:
    # Parsed both before and after the subcommand; the copy attached to each
    # subparser uses SUPPRESS so it does not clobber values given up front.
    p = argparse.ArgumentParser(add_help=False)
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--threads", type=int, default=default,
                   help="worker processes (default: available cores)")
    p.add_argument("--format", choices=FORMATS, default=default, help="output format")
    p.add_argument("--no-timing", action="store_true",
                   default=argparse.SUPPRESS if suppress else False,
                   help="omit the timing line")
    return p


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matroidaut",
        description="Symmetry of matroids via Johnson-graph stable sets.",
        parents=[_global_parent(False)],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    common = [_global_parent(True)]

    p = sub.add_parser("stable-sets", parents=common, help="enumerate or count stable sets of J(n, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--invariant", metavar="CYCLES", help='only sets fixed by a permutation, e.g. "(1 2)(3 4)"')
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("aut", parents=common, help="automorphism group of a matroid file")
    p.add_argument("--input", required=True, metavar="PATH")

    p = sub.add_parser("reconstruct", parents=common, help="rebuild M from M\\ef and M/ef")
    p.add_argument("--del", dest="deleted", required=True, metavar="PATH")
    p.add_argument("--con", dest="contracted", required=True, metavar="PATH")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("census", parents=common, help="exhaustive census by automorphism class")
    p.add_argument("--kind", choices=sorted(KINDS), required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--cache", metavar="DIR")

    p = sub.add_parser("verify", parents=common, help="run a finite lemma check")
    p.add_argument("--lemma", choices=list(census.LEMMAS), required=True)
    p.add_argument("--max-n", type=int)
    p.add_argument("--k", type=_int_list)

    p = sub.add_parser("rank-dist", parents=common, help="rank distribution of sparse paving matroids")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, default=census.DEFAULT_BETA)
    return parser


def _validate(args):
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    for name in ("n", "r", "max_n"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be nonnegative")
    if args.command == "stable-sets" and args.invariant is not None:
        try:
            args.perm = Permutation.parse(args.invariant, args.n)
        except ValueError as exc:
            raise UsageError(f"--invariant: {exc}")
    if args.command == "verify" and args.k is not None and any(k < 0 for k in args.k):
        raise UsageError("--k values must be nonnegative")
    if args.command == "rank-dist" and not args.beta > 0:
        raise UsageError("--beta must be positive")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _lines(rows) -> str:
    return "".join(row + "\n" for row in rows)


def _cmd_stable_sets(args) -> str:
    params = JohnsonParams(args.n, args.r)
    perm = getattr(args, "perm", None)
    if args.count_only:
        count = (count_stable_sets(params) if perm is None
                 else count_invariant_stable_sets(params, perm))
        if args.format == "json-lines":
            return json.dumps({"n": args.n, "r": args.r, "count": count}) + "\n"
        if args.format == "csv":
            return f"n,r,count\n{args.n},{args.r},{count}\n"
        return f"{count}\n"
    found = iter_stable_sets(params) if perm is None else iter_invariant_stable_sets(params, perm)
    if args.format == "json-lines":
        return _lines(json.dumps([format_subset(x) for x in s.members]) for s in found)
    if args.format == "csv":
        return _lines(["size,members"] + [f'{len(s)},"{format_stable_set(s.members)}"' for s in found])
    return _lines(format_stable_set(s.members) for s in found)


def _cmd_aut(args) -> str:
    m = load(args.input)
    cls = automorphism_classification(m)
    group = automorphism_group(m)
    pair = "" if cls.generator_pair is None else "({} {})".format(*cls.generator_pair)
    if args.format == "json-lines":
        return json.dumps({"order": cls.group_order, "kind": cls.kind.value,
                           "generator": pair or None, "elements": [str(p) for p in group]}) + "\n"
    if args.format == "csv":
        return f"order,kind,generator\n{cls.group_order},{cls.kind.value},{pair}\n"
    rows = [f"order: {cls.group_order}", f"kind: {cls.kind.value}"]
    if pair:
        rows.append(f"generator: {pair}")
    rows += [f"  {p}" for p in group]
    return _lines(rows)


def _cmd_reconstruct(args) -> str:
    deleted, contracted = load(args.deleted), load(args.contracted)
    m = reconstruct_from_minors(deleted, contracted, args.n, args.r, args.e, args.f)
    return to_json(m) + "\n"


def _record_json(rec) -> str:
    return json.dumps({"kind": rec.kind, "n": rec.n, "r": rec.r, "total": rec.total,
                       "aut_trivial": rec.aut_trivial,
                       "aut_single_transposition": rec.aut_single_transposition,
                       "aut_other": rec.aut_other})


def _cmd_census(args):
    run = census.sparse_census if args.kind == "sparse" else census.full_census
    records = run(args.max_n, threads=args.threads, cache_dir=args.cache)
    if args.format == "json-lines":
        table = _lines(_record_json(rec) for rec in
                       sorted(records, key=lambda rec: (rec.kind, rec.n, rec.r)))
    else:
        table = census.to_csv(records)
    trend = census.format_trend(census.trend_report(records))
    if args.out:
        return table, trend
    return (trend if args.format == "plain" else table), None


def _cmd_verify(args) -> str:
    report = census.LEMMAS[args.lemma](args.max_n, args.k)
    if args.format == "json-lines":
        payload = {"lemma_id": report.lemma_id, "grid": report.grid, "checked": report.checked,
                   "failures": report.failures}
        if not args.no_timing:
            payload["wall_time"] = round(report.wall_time, 3)
        return json.dumps(payload) + "\n", report.ok
    return report.format(timing=not args.no_timing), report.ok


def _cmd_rank_dist(args) -> str:
    dist = census.rank_distribution(args.n, args.beta)
    window = dist.window
    if args.format == "json-lines":
        rows = [json.dumps({"r": r, "fraction": str(frac), "in_window": r in window})
                for r, frac in enumerate(dist.fractions)]
        rows.append(json.dumps({"in_window": str(dist.in_window), "out_window": str(dist.out_window)}))
        return _lines(rows)
    rows = ["r,fraction,decimal,in_window"]
    rows += [f"{r},{frac},{float(frac):.9f},{int(r in window)}" for r, frac in enumerate(dist.fractions)]
    if args.format == "plain":
        lo, hi = (window.start, window.stop - 1) if len(window) else ("-", "-")
        rows.append(f"window: [{lo}, {hi}]  beta={args.beta}")
        rows.append(f"in_window: {float(dist.in_window):.9f}  out_window: {float(dist.out_window):.9f}")
    return _lines(rows)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "csv" if args.command == "census" else "plain"
    try:
        _validate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"matroidaut: error: {exc}", file=sys.stderr)
        return 2

    start = time.perf_counter()
    code = 0
    try:
        if args.command == "stable-sets":
            _emit(_cmd_stable_sets(args), args.out)
        elif args.command == "aut":
            _emit(_cmd_aut(args), None)
        elif args.command == "reconstruct":
            _emit(_cmd_reconstruct(args), args.out)
        elif args.command == "census":
            table, trend = _cmd_census(args)
            _emit(table, args.out)
            if trend is not None:
                sys.stdout.write(trend)
        elif args.command == "verify":
            text, ok = _cmd_verify(args)
            _emit(text, None)
            code = 0 if ok else 1
        elif args.command == "rank-dist":
            _emit(_cmd_rank_dist(args), None)
    except BudgetExceeded as exc:
        print(f"matroidaut: refused: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"matroidaut: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"matroidaut: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"matroidaut: error: {exc}", file=sys.stderr)
        return 2
    if not args.no_timing:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
