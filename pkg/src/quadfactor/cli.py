"""Command-line front end: sieving, records, sums, and verification reports.

Data rows go to --output (or stdout) as CSV or JSON lines; everything else
goes to stderr.  Exit codes: 0 success, 1 validation/usage error, 2 internal
assertion failure.  Floats are serialized with 17 significant digits so
output files are byte-stable and round-trip exact.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .chebsums import mertens_ap, sum_ledger
from .modmath import DEFAULT_SEGMENT_SIZE, primes_in, sqrt_minus_one
from .polysieve import HI_MAX, iter_records, records_scan
from .rootcount import solution_count
from .verifier import contradiction_probe, coverage_curve, largest_prime_probe

WORKERS_ENV = "QUADFACTOR_WORKERS"
X_MAX = HI_MAX // 2
Q_MAX = 10**4


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Shared run parameters resolved from flags and the environment."""

    workers: int
    segment_size: int
    output: Optional[str]
    fmt: str
    tail_tolerance: float = 1e-3
    seed: int = 0


def _fmt_value(v: object) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _emit(config: RunConfig, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    out = open(config.output, "w", newline="") if config.output else sys.stdout
    try:
        if config.fmt == "csv":
            out.write(",".join(header) + "\n")
            for row in rows:
                out.write(",".join(_fmt_value(v) for v in row) + "\n")
        else:
            for row in rows:
                out.write(json.dumps(dict(zip(header, row))) + "\n")
    finally:
        if config.output:
            out.close()


def _log(message: str) -> None:
    print(message, file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the contract here is 1
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="quadfactor",
        description="Factor n^2+1 over intervals and evaluate the sum ledgers "
        "locating its prime divisors.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    common.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"worker processes for sieving (default: ${WORKERS_ENV} or 1)",
    )
    common.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("sieve", parents=[common], help="factor n^2+1 for n in [lo, hi]")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)

    p = sub.add_parser("records", parents=[common], help="largest-prime-factor records scan")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("sums", parents=[common], help="primary/secondary term ledger")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--delta", type=float, action="append", required=True)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--a", type=int, default=1)

    p = sub.add_parser("verify", parents=[common], help="randomized property trials")
    p.add_argument("target", choices=("counts",))
    p.add_argument("--x", type=int, default=10**6, help="maximum interval base")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("coverage", parents=[common], help="cumulative divisor coverage curve")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--prime-powers", action="store_true")
    p.add_argument("--tail-tolerance", type=float, default=1e-3)

    p = sub.add_parser("chain", parents=[common], help="truncated inequality ledger per delta")
    p.add_argument("--x", type=int, required=True)
    p.add_argument(
        "--delta-grid",
        default="0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
        help="comma-separated delta values",
    )

    p = sub.add_parser("probe", parents=[common], help="largest prime factor over (x, 2x]")
    p.add_argument("--x", type=int, required=True)

    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    workers = args.workers if args.workers is not None else _default_workers()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if args.segment_size < 1:
        raise ValueError("segment-size must be >= 1")
    return RunConfig(
        workers=workers,
        segment_size=args.segment_size,
        output=args.output,
        fmt=args.format,
        tail_tolerance=getattr(args, "tail_tolerance", 1e-3),
        seed=getattr(args, "seed", 0),
    )


def _require_interval_x(x: int) -> None:
    if not 1 <= x <= X_MAX:
        raise ValueError(f"x must be in [1, {X_MAX}]")


def _cmd_sieve(args: argparse.Namespace, config: RunConfig) -> int:
    if not 2 <= args.lo <= args.hi <= HI_MAX:
        raise ValueError(f"need 2 <= lo <= hi <= {HI_MAX}")

    def rows() -> Iterator[Sequence[object]]:
        for rec in iter_records(args.lo, args.hi, config.segment_size, config.workers):
            yield (
                rec.n,
                rec.value,
                ";".join(f"{p}^{e}" for p, e in rec.factors),
                rec.largest_prime,
                math.log(rec.largest_prime) / math.log(rec.n),
            )

    _emit(config, ("n", "n2p1", "factorization", "largest_prime", "exponent"), rows())
    return 0


def _cmd_records(args: argparse.Namespace, config: RunConfig) -> int:
    if not 2 <= args.n_max <= HI_MAX:
        raise ValueError(f"need 2 <= n-max <= {HI_MAX}")
    rows = (
        (row.n, row.largest_prime, row.exponent, row.is_record)
        for row in records_scan(args.n_max, config.segment_size, config.workers)
    )
    _emit(config, ("n", "largest_prime", "exponent", "is_record"), rows)
    return 0


def _cmd_sums(args: argparse.Namespace, config: RunConfig) -> int:
    if args.x < 2 or args.x > HI_MAX:
        raise ValueError(f"x must be in [2, {HI_MAX}]")
    if not 1 <= args.q <= Q_MAX:
        raise ValueError(f"q must be in [1, {Q_MAX}]")
    if math.gcd(args.a % args.q, args.q) != 1:
        raise ValueError(f"residue {args.a} is not invertible mod {args.q}")
    rows = []
    for delta in args.delta:
        led = sum_ledger(args.x, delta)
        rows.append(
            (
                led.x,
                led.delta,
                led.cutoff,
                led.R,
                led.S,
                led.residual_R,
                led.residual_S,
                led.term_count,
                args.q,
                args.a,
                mertens_ap(led.cutoff, args.q, args.a),
            )
        )
    header = (
        "x", "delta", "cutoff", "R", "S", "residual_R", "residual_S",
        "term_count", "q", "a", "mertens",
    )
    _emit(config, header, rows)
    return 0


def _cmd_verify_counts(args: argparse.Namespace, config: RunConfig) -> int:
    if args.x < 1 or args.x > 10**6:
        raise ValueError("verify counts supports x in [1, 10^6]")
    if args.trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(config.seed)
    pool = primes_in(5, 10**5, (4, 1))
    _log(f"verify counts: seed={config.seed} trials={args.trials} x_max={args.x}")
    failures = 0
    rows = []
    for trial in range(args.trials):
        p = pool[rng.randrange(len(pool))]
        x = rng.randint(1, args.x)
        while 4 * x * x + 1 < p:
            x = rng.randint(1, args.x)
        root = sqrt_minus_one(p)
        result = solution_count(x, root)
        identity_ok = result.exact == result.floor_identity
        bound_ok = Fraction(result.exact) <= result.bound
        failures += 0 if (identity_ok and bound_ok) else 1
        rows.append(
            (
                trial,
                x,
                p,
                root.b,
                result.exact,
                result.floor_identity,
                result.bound.numerator,
                result.bound.denominator,
                identity_ok,
                bound_ok,
            )
        )
    header = (
        "trial", "x", "p", "b", "exact", "floor_identity",
        "bound_num", "bound_den", "identity_ok", "bound_ok",
    )
    _emit(config, header, rows)
    if failures:
        _log(f"verify counts: {failures} of {args.trials} trials FAILED")
        return 2
    _log(f"verify counts: all {args.trials} trials passed")
    return 0


def _cmd_coverage(args: argparse.Namespace, config: RunConfig) -> int:
    _require_interval_x(args.x)
    records = list(
        iter_records(args.x + 1, 2 * args.x, config.segment_size, config.workers)
    )
    curve = coverage_curve(
        args.x,
        with_prime_powers=args.prime_powers,
        tail_tolerance=config.tail_tolerance,
        records=records,
    )
    rows = (
        (curve.x, y, c, rho, curve.with_prime_powers) for y, c, rho in curve.points
    )
    _emit(config, ("x", "y", "C", "rho", "with_prime_powers"), rows)
    _log(
        f"coverage: x={curve.x} prime_powers={curve.with_prime_powers} "
        f"tail_tolerance={curve.tail_tolerance:g} delta_star={curve.delta_star}"
    )
    for tol in (1e-2, 1e-3, 1e-4):
        alt = coverage_curve(
            args.x, with_prime_powers=args.prime_powers, tail_tolerance=tol,
            records=records,
        )
        _log(f"coverage: delta_star at tolerance {tol:g} = {alt.delta_star}")
    return 0


def _cmd_chain(args: argparse.Namespace, config: RunConfig) -> int:
    _require_interval_x(args.x)
    if args.x < 2:
        raise ValueError("chain needs x >= 2")
    try:
        grid = [float(v) for v in str(args.delta_grid).split(",") if v != ""]
    except ValueError as exc:
        raise ValueError(f"bad delta grid: {exc}") from None
    if not grid:
        raise ValueError("delta grid is empty")
    records = list(
        iter_records(args.x + 1, 2 * args.x, config.segment_size, config.workers)
    )
    rows = []
    for delta in grid:
        led = contradiction_probe(args.x, delta, records=records)
        rows.append(
            (
                led.x, led.delta, led.cutoff, led.lhs_exact, led.lhs_main_term,
                led.lambda_side, led.n_trunc, led.R, led.S, led.margin,
                led.margin_exact,
            )
        )
    header = (
        "x", "delta", "cutoff", "lhs_exact", "lhs_main_term", "lambda_side",
        "n_trunc", "R", "S", "margin", "margin_exact",
    )
    _emit(config, header, rows)
    return 0


def _cmd_probe(args: argparse.Namespace, config: RunConfig) -> int:
    _require_interval_x(args.x)
    if args.x < 2:
        raise ValueError("probe needs x >= 2")
    result = largest_prime_probe(
        args.x, segment_size=config.segment_size, workers=config.workers
    )
    _emit(
        config,
        ("x", "max_prime", "arg_n", "exponent", "in_interval"),
        [(result.x, result.max_prime, result.arg_n, result.exponent, result.in_interval)],
    )
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        config = _config(args)
        if args.cmd == "sieve":
            return _cmd_sieve(args, config)
        if args.cmd == "records":
            return _cmd_records(args, config)
        if args.cmd == "sums":
            return _cmd_sums(args, config)
        if args.cmd == "verify":
            return _cmd_verify_counts(args, config)
        if args.cmd == "coverage":
            return _cmd_coverage(args, config)
        if args.cmd == "chain":
            return _cmd_chain(args, config)
        if args.cmd == "probe":
            return _cmd_probe(args, config)
        parser.print_usage(sys.stderr)
        return 1
    except (ValueError, OverflowError) as exc:
        _log(f"error: {exc}")
        return 1
    except AssertionError as exc:
        _log(f"internal check failed: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
