"""Command-line interface with machine-readable output.

Exit codes are a stable contract: 0 success, 1 usage error, 2 verification
failure, 3 conjecture or bound violation.  FIBREG_THREADS caps worker processes
for the scanning subcommands (default: all cores).
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from enum import Enum

from .fibcore import is_prime, period_data, primes_up_to
from .kernel import RankReport, conjecture_scan, kernel_rank, rank_table_csv
from .lengyel import (
    WallReport,
    direct_valuation,
    lengyel_valuation,
    wall_check,
)
from .representation import (
    Provenance,
    WallAssumptionError,
    build_for_class,
    build_general,
    evaluate,
    rep_to_json_dict,
    verify_monoid_structure,
    verify_relations,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_VIOLATION = 3


class OutputFormat(Enum):
    HUMAN = "human"
    JSON = "json"
    CSV = "csv"


_WALL_CSV_HEADER = "p,alpha,val_at_alpha,pi_p,pi_p2,wall_negative"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 1 for usage errors (argparse defaults to 2)
    def error(self, message):
        raise _UsageError(message)


def _worker_count() -> int:
    raw = os.environ.get("FIBREG_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise _UsageError(f"FIBREG_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise _UsageError("FIBREG_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


def _parallel_map(fn, items):
    """Map fn over items, in processes when allowed; result order follows items."""
    workers = min(_worker_count(), len(items)) if items else 1
    if workers <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise _UsageError(f"{p} is not prime")


def _class_rep(p: int):
    """Class constructor with the unconditional fallback, plus a notice flag."""
    try:
        return build_for_class(p), None
    except WallAssumptionError as exc:
        return build_general(p), str(exc)


def _wall_row(p: int) -> WallReport:
    return wall_check(p)


def _wall_csv_line(r: WallReport) -> str:
    return (
        f"{r.p},{r.alpha},{r.val_at_alpha},{r.pi_p},{r.pi_p2},"
        f"{str(r.wall_negative).lower()}"
    )


def cmd_valuation(args) -> int:
    _require_prime(args.p)
    if args.n < 1:
        raise _UsageError("n must be at least 1")
    p, n = args.p, args.n
    values = {}
    if args.method in ("direct", "all"):
        values["direct"] = direct_valuation(p, n)
    if args.method in ("lengyel", "all"):
        values["lengyel"] = lengyel_valuation(p, n)
    if args.method in ("matrix", "all"):
        rep, notice = _class_rep(p)
        if notice:
            print(f"notice: {notice}; using the unconditional construction", file=sys.stderr)
        values["matrix"] = evaluate(rep, n - 1)
    match = len(set(values.values())) == 1
    if args.format == "json":
        out = {"p": p, "n": n}
        out.update(values)
        if args.method == "all":
            out["match"] = match
        print(json.dumps(out))
    else:
        for name, v in values.items():
            print(f"nu_{p}(F_{n}) = {v}  [{name}]")
        if args.method == "all":
            print("MATCH" if match else "MISMATCH")
    return EXIT_OK if match else EXIT_VERIFY


def cmd_periods(args) -> int:
    if args.m < 2:
        raise _UsageError("modulus must be at least 2")
    pd = period_data(args.m)
    divides = pd.pisano % pd.restricted == 0
    if args.format == "json":
        print(json.dumps({
            "m": args.m,
            "alpha": pd.restricted,
            "pi": pd.pisano,
            "alpha_divides_pi": divides,
        }))
    else:
        print(f"alpha({args.m}) = {pd.restricted}")
        print(f"pi({args.m}) = {pd.pisano}")
        print(f"alpha divides pi: {'yes' if divides else 'no'}")
    return EXIT_OK


def cmd_rep(args) -> int:
    _require_prime(args.p)
    rep, notice = _class_rep(args.p)
    if notice:
        print(f"notice: {notice}; using the unconditional construction", file=sys.stderr)
    payload = json.dumps(rep_to_json_dict(rep), indent=2)
    if args.out:
        with open(args.out, "w") as fp:
            fp.write(payload + "\n")
        print(f"wrote {rep.r}x{rep.r} representation for p={args.p} to {args.out}")
        verify_stream = sys.stdout
    else:
        print(payload)
        verify_stream = sys.stderr
    code = EXIT_OK
    if args.verify is not None:
        if args.verify < 0:
            raise _UsageError("--verify bound must be nonnegative")
        for report in verify_relations(args.p, args.verify):
            status = "PASS" if report.ok else f"FAIL ({len(report.failures)} failures)"
            print(f"relation {report.relation_id}: {status}", file=verify_stream)
            if not report.ok:
                code = EXIT_VERIFY
    return code


def _rank_reports(args) -> list[RankReport]:
    if args.scan is not None:
        if args.scan < 3:
            raise _UsageError("--scan bound must be at least 3")
        if args.L is not None or args.max_depth != 16:
            return conjecture_scan(args.scan, L=args.L, max_depth=args.max_depth)
        return _parallel_map(_rank_worker, _scan_prime_list(args.scan))
    _require_prime(args.p)
    return [kernel_rank(args.p, L=args.L, max_depth=args.max_depth)]


def _scan_prime_list(p_max: int) -> list[int]:
    return [p for p in primes_up_to(p_max) if p not in (2, 5)]


def _rank_worker(p: int) -> RankReport:
    return kernel_rank(p)


def cmd_rank(args) -> int:
    reports = _rank_reports(args)
    if args.format == "csv":
        sys.stdout.write(rank_table_csv(reports))
    elif args.format == "json":
        for r in reports:
            print(json.dumps({
                "p": r.p,
                "class": r.prime_class.value,
                "alpha": r.alpha,
                "pisano": r.pisano,
                "rank": r.rank,
                "theorem_bound": r.theorem_bound,
                "alpha_plus_1": r.alpha + 1,
                "conjecture_holds": r.conjecture_holds,
                "L": r.truncation_length,
                "stabilized": r.stabilized,
            }))
    else:
        for r in reports:
            print(
                f"p={r.p} class={r.prime_class.value} alpha={r.alpha} rank={r.rank} "
                f"bound={r.theorem_bound} conjecture_holds={str(r.conjecture_holds).lower()} "
                f"L={r.truncation_length} stabilized={str(r.stabilized).lower()}"
            )
    code = EXIT_OK
    for r in reports:
        if not r.stabilized:
            print(f"warning: p={r.p} did not stabilize within budget", file=sys.stderr)
        elif r.rank > r.theorem_bound:
            print(f"violation: p={r.p} rank {r.rank} exceeds bound {r.theorem_bound}",
                  file=sys.stderr)
            code = EXIT_VIOLATION
    return code


def cmd_wall(args) -> int:
    if args.scan < 2:
        raise _UsageError("--scan bound must be at least 2")
    reports = _parallel_map(_wall_row, primes_up_to(args.scan))
    if args.format == "json":
        for r in reports:
            print(json.dumps({
                "p": r.p, "alpha": r.alpha, "val_at_alpha": r.val_at_alpha,
                "pi_p": r.pi_p, "pi_p2": r.pi_p2, "wall_negative": r.wall_negative,
            }))
    else:
        print(_WALL_CSV_HEADER)
        for r in reports:
            print(_wall_csv_line(r))
    positives = [r.p for r in reports if not r.wall_negative]
    if positives:
        print(f"counterexample candidates found: {positives}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.scan is not None:
        if args.scan < 2:
            raise _UsageError("--scan bound must be at least 2")
        targets = primes_up_to(args.scan)
    else:
        _require_prime(args.p)
        targets = [args.p]
    if args.n_max < 1:
        raise _UsageError("--n-max must be at least 1")
    code = EXIT_OK
    for p in targets:
        for report in verify_relations(p, args.n_max):
            status = "PASS" if report.ok else f"FAIL ({len(report.failures)} failures)"
            print(f"p={p} relation {report.relation_id}: {status}")
            if not report.ok:
                code = EXIT_VERIFY
        rep, notice = _class_rep(p)
        if notice:
            print(f"notice: {notice}; using the unconditional construction", file=sys.stderr)
        if rep.provenance == Provenance.ONE_FOUR:
            monoid = verify_monoid_structure(rep)
            status = "PASS" if monoid.ok else "FAIL"
            print(f"p={p} monoid structure: {status}")
            if not monoid.ok:
                code = EXIT_VERIFY
        agree_to = min(args.n_max, 2000)
        bad = 0
        for n in range(1, agree_to + 1):
            lv = lengyel_valuation(p, n)
            if lv != direct_valuation(p, n) or lv != evaluate(rep, n - 1):
                bad += 1
        status = "PASS" if bad == 0 else f"FAIL ({bad} mismatches)"
        print(f"p={p} three-method agreement (n <= {agree_to}): {status}")
        if bad:
            code = EXIT_VERIFY
    return code


def build_parser() -> _Parser:
    parser = _Parser(prog="fibreg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("valuation", help="nu_p(F_n) by one or all methods")
    v.add_argument("p", type=int)
    v.add_argument("n", type=int)
    v.add_argument("--method", choices=("direct", "lengyel", "matrix", "all"),
                   default="lengyel")
    v.add_argument("--format", choices=(OutputFormat.HUMAN.value, OutputFormat.JSON.value),
                   default=OutputFormat.HUMAN.value)
    v.set_defaults(fn=cmd_valuation)

    pe = sub.add_parser("periods", help="restricted and Pisano periods of a modulus")
    pe.add_argument("m", type=int)
    pe.add_argument("--format", choices=(OutputFormat.HUMAN.value, OutputFormat.JSON.value),
                    default=OutputFormat.HUMAN.value)
    pe.set_defaults(fn=cmd_periods)

    re_ = sub.add_parser("rep", help="build the class representation as JSON")
    re_.add_argument("p", type=int)
    re_.add_argument("--out", metavar="FILE")
    re_.add_argument("--verify", type=int, nargs="?", const=1000, default=None,
                     metavar="N_MAX", help="sweep the class relations up to N_MAX (default 1000)")
    re_.set_defaults(fn=cmd_rep)

    ra = sub.add_parser("rank", help="empirical kernel-module rank")
    ra.add_argument("p", type=int, nargs="?")
    ra.add_argument("--scan", type=int, metavar="P_MAX")
    ra.add_argument("--L", type=int, default=None)
    ra.add_argument("--max-depth", type=int, default=16, dest="max_depth")
    ra.add_argument("--format", choices=tuple(f.value for f in OutputFormat),
                    default=OutputFormat.HUMAN.value)
    ra.set_defaults(fn=cmd_rank)

    w = sub.add_parser("wall", help="scan primes for the open period question")
    w.add_argument("--scan", type=int, required=True, metavar="P_MAX")
    w.add_argument("--format", choices=(OutputFormat.CSV.value, OutputFormat.JSON.value),
                   default=OutputFormat.CSV.value)
    w.set_defaults(fn=cmd_wall)

    ve = sub.add_parser("verify", help="relation suites and cross-method agreement")
    ve.add_argument("p", type=int, nargs="?")
    ve.add_argument("--scan", type=int, metavar="P_MAX")
    ve.add_argument("--n-max", type=int, default=1000, dest="n_max")
    ve.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.fn is cmd_rank and args.p is None and args.scan is None:
            raise _UsageError("rank needs a prime or --scan")
        if args.fn is cmd_verify and args.p is None and args.scan is None:
            raise _UsageError("verify needs a prime or --scan")
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
