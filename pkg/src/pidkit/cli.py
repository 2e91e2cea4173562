"""Command-line front end.

Exit codes: 0 success, 1 verification or decoding failure, 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .capacity import INTERMEDIATE, RegimeError, capacity_report
from .converse import BudgetExceeded, converse_rate, default_budget
from .schemes import ConstructionError, build_scheme
from .serialization import DocumentError, dumps, scheme_from_json, scheme_to_json
from .simulator import DeliveryError, random_messages, run_delivery
from .verifier import DEFAULT_BUDGET, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP_HEADER = ["K", "M", "N", "lower", "upper", "exact", "source"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_scheme(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return scheme_from_json(text)
    except DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_capacity(args) -> int:
    try:
        rep = capacity_report(args.K, args.M, args.N)
    except RegimeError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        sys.stdout.write(dumps(rep.to_dict()))
    elif not rep.feasible:
        print(f"K={rep.K} M={rep.M} N={rep.N}: infeasible (N < ceil(K/M))")
    elif rep.exact is not None:
        print(f"K={rep.K} M={rep.M} N={rep.N}: capacity {_frac(rep.exact)} ({rep.regime})")
    else:
        print(
            f"K={rep.K} M={rep.M} N={rep.N}: {_frac(rep.lower)} <= C <= {_frac(rep.upper)} "
            f"({rep.regime}, lower bound attained at N={rep.witness_N})"
        )
    return EXIT_OK


def cmd_build(args) -> int:
    if args.N is not None and args.servers is not None and args.N != args.servers:
        raise UsageError("N given twice with different values")
    N = args.N if args.N is not None else args.servers
    try:
        s = build_scheme(args.K, args.M, N)
    except RegimeError as exc:
        raise UsageError(str(exc)) from exc
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(scheme_to_json(s), args.out)
    report = verify(s, args.exhaustive_budget)
    print(
        f"{s.construction} scheme: N={s.N} p={s.p} L={s.L} rate={_frac(s.rate)} eta={_frac(s.eta)}; "
        f"verification {'passed' if report.ok else 'FAILED'} (exhaustive {report.exhaustive_privacy.status})",
        file=sys.stderr,
    )
    for line in report.details:
        print(f"  {line}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    s = _load_scheme(args.scheme)
    if args.k is not None and not 1 <= args.k <= s.K:
        raise UsageError(f"--k must lie in [1:{s.K}]")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rng = np.random.default_rng(args.seed)
    transcripts = []
    for _ in range(args.trials):
        k = args.k if args.k is not None else int(rng.integers(1, s.K + 1))
        messages = random_messages(s, rng)
        seed = int(rng.integers(0, 2**63))
        try:
            transcripts.append(run_delivery(s, k, messages, seed=seed))
        except DeliveryError as exc:
            print(f"delivery failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
    ok = sum(t.success for t in transcripts)
    print(f"{ok}/{len(transcripts)} decoded; download {s.download} symbols for L={s.L} (rate {_frac(s.rate)})")
    if args.emit_transcript:
        Path(args.emit_transcript).write_text(dumps({"transcripts": [t.to_dict() for t in transcripts]}))
    return EXIT_OK if ok == len(transcripts) else EXIT_FAIL


def cmd_verify(args) -> int:
    s = _load_scheme(args.scheme)
    report = verify(s, args.exhaustive_budget)
    if args.json:
        sys.stdout.write(dumps(report.to_dict()))
    else:
        print(f"correctness:        {'ok' if report.correctness_ok else 'FAILED'}")
        print(f"privacy (rank):     {'ok' if report.rank_privacy_ok else 'FAILED'}")
        ex = report.exhaustive_privacy
        print(f"privacy (exhaust.): {ex.status} ({ex.states} states per index)")
        print(f"security:           {'ok' if report.security_ok else 'FAILED'}")
        print(f"randomness size:    {'ok' if report.eta_ok else 'FAILED'}")
        for line in report.details:
            print(f"  {line}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_converse(args) -> int:
    budget = args.budget if args.budget is not None else default_budget()
    try:
        cert = converse_rate(args.K, args.M, args.N, budget=budget, symmetry=not args.no_symmetry)
    except RegimeError as exc:
        raise UsageError(str(exc)) from exc
    except BudgetExceeded as exc:
        print(f"refusing: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(dumps(cert.to_dict()), args.out)
    print(
        f"rate <= {_frac(cert.rate_bound)} (min download {_frac(cert.lp_value)}, "
        f"{cert.designs_examined} designs examined)",
        file=sys.stderr,
    )
    return EXIT_OK


def sweep_row(K: int, M: int, N: int, budget: int) -> dict:
    """Closed-form bounds, tightened to an exact value when the search meets the lower bound."""
    rep = capacity_report(K, M, N)
    lower, upper, source = rep.lower, rep.upper, "closed-form"
    if rep.regime == INTERMEDIATE:
        try:
            bound = converse_rate(K, M, N, budget=budget).rate_bound
        except BudgetExceeded:
            bound = None
        if bound == lower:
            upper, source = bound, "search-certified"
    return {"K": K, "M": M, "N": N, "lower": lower, "upper": upper, "exact": lower == upper, "source": source}


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected a..b") from exc


def cmd_sweep(args) -> int:
    budget = args.budget if args.budget is not None else default_budget()
    render = (lambda x: f"{float(x):.6f}") if args.decimal else _frac
    try:
        capacity_report(args.K, args.M, 0)
    except RegimeError as exc:
        raise UsageError(str(exc)) from exc
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for N in _parse_range(args.N_range):
        try:
            row = sweep_row(args.K, args.M, N, budget)
        except RegimeError as exc:
            raise UsageError(str(exc)) from exc
        writer.writerow(
            [row["K"], row["M"], row["N"], render(row["lower"]), render(row["upper"]),
             "true" if row["exact"] else "false", row["source"]]
        )
    _write(buf.getvalue(), args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pidkit", description="Build, run and check private information delivery schemes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("capacity", help="closed-form capacity bounds")
    p.add_argument("K", type=int)
    p.add_argument("M", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("build", help="construct and verify a scheme")
    p.add_argument("K", type=int)
    p.add_argument("M", type=int)
    p.add_argument("N", type=int, nargs="?")
    p.add_argument("--servers", type=int, help="same as the positional N")
    p.add_argument("--out", help="write the scheme here instead of stdout")
    p.add_argument("--exhaustive-budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", help="run deliveries through a scheme file")
    p.add_argument("scheme")
    p.add_argument("--k", type=int, help="message index (random per trial if omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--emit-transcript", metavar="PATH")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a scheme file")
    p.add_argument("scheme")
    p.add_argument("--exhaustive-budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("converse", help="search for a rate upper bound")
    p.add_argument("K", type=int)
    p.add_argument("M", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--budget", type=int, help="max designs (default: PIDKIT_BUDGET or 10^6)")
    p.add_argument("--no-symmetry", action="store_true", help="search without relabelling reduction")
    p.add_argument("--out")
    p.set_defaults(func=cmd_converse)

    p = sub.add_parser("sweep", help="capacity bounds over a range of N as CSV")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N-range", required=True, metavar="A..B")
    p.add_argument("--csv", help="write here instead of stdout")
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"pidkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
