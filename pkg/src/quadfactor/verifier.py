"""End-to-end checks tying the sieve output to the analytic sum machinery.

The exact left side sum(log(n^2+1)) over (x, 2x] is reproduced from the
factor sieve through the von Mangoldt identity, decomposed into a coverage
curve by prime cutoff, and compared against the primary/secondary terms at
each delta.  Anything asymptotic is measured and reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .chebsums import KahanSum, power_cutoff, primary_term, secondary_term
from .modmath import DEFAULT_SEGMENT_SIZE
from .polysieve import FactorizationRecord, HI_MAX, incidence_counts, iter_records

DELTA_GRID = tuple(round(0.1 * i, 1) for i in range(11))


@dataclass(frozen=True, slots=True)
class ChainLedger:
    """One (x, delta) evaluation of the truncated-sum inequality chain.

    n_trunc sums log p * incidence(p) over primes up to the cutoff (the p = 2
    term included); R + S covers the p = 1 (mod 4) classes through the
    per-prime upper bound, so n_trunc <= R + S is the accumulated form of the
    summand-wise bound.  margin compares R + S against the 2x log x main
    term; margin_exact is its ground-truth analogue.
    """

    x: int
    lhs_exact: float
    lhs_main_term: float
    lambda_side: float
    delta: Optional[float] = None
    cutoff: Optional[int] = None
    n_trunc: Optional[float] = None
    R: Optional[float] = None
    S: Optional[float] = None
    margin: Optional[float] = None
    margin_exact: Optional[float] = None


@dataclass(frozen=True, slots=True)
class CoverageCurve:
    """Cumulative share of sum(log(n^2+1)) explained by divisors up to y.

    points holds (y, C, rho) at the delta grid cutoffs y = x^(1+delta) plus
    the terminal y = 4x^2+1; delta_star is the smallest delta whose cutoff
    already covers all but tail_tolerance of the total (None if the curve
    never gets there, which happens without prime powers once the dropped
    power mass exceeds the tolerance).
    """

    x: int
    with_prime_powers: bool
    tail_tolerance: float
    total: float
    points: Tuple[Tuple[int, float, float], ...]
    delta_star: Optional[float]


@dataclass(frozen=True, slots=True)
class ProbeResult:
    """Largest prime factor over (x, 2x] and where it lands."""

    x: int
    max_prime: int
    arg_n: int
    exponent: float
    in_interval: bool


def _check_x(x: int) -> None:
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > HI_MAX // 2:
        raise OverflowError(f"x={x} above 2^30: 2x exceeds the sieve bound")


def _interval_records(
    x: int,
    records: Optional[Iterable[FactorizationRecord]],
    segment_size: int,
    workers: int,
) -> Sequence[FactorizationRecord]:
    if records is None:
        return list(iter_records(x + 1, 2 * x, segment_size, workers))
    return records if isinstance(records, Sequence) else list(records)


def lhs_logsum(x: int) -> float:
    """sum(log(n^2+1)) over x < n <= 2x, ascending, compensated."""
    _check_x(x)
    acc = KahanSum()
    for n in range(x + 1, 2 * x + 1):
        acc.add(math.log(n * n + 1))
    return acc.total


def lambda_identity_check(
    x: int,
    records: Optional[Iterable[FactorizationRecord]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> ChainLedger:
    """Rebuild the log sum from factorizations: each p^e adds e log p.

    The two sides agree exactly in integer arithmetic; the ledger records the
    float-accumulation difference, which stays at the 1e-9 relative level.
    """
    _check_x(x)
    recs = _interval_records(x, records, segment_size, workers)
    acc = KahanSum()
    for rec in recs:
        for p, e in rec.factors:
            acc.add(e * math.log(p))
    return ChainLedger(
        x=x,
        lhs_exact=lhs_logsum(x),
        lhs_main_term=2.0 * x * math.log(x),
        lambda_side=acc.total,
    )


def coverage_curve(
    x: int,
    with_prime_powers: bool = True,
    tail_tolerance: float = 1e-3,
    records: Optional[Iterable[FactorizationRecord]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> CoverageCurve:
    """Accumulate C(y) = sum(log p * incidence(d)) over divisors d <= y.

    Primes up to 2x enter through their sieve incidence; larger primes enter
    through each record's residual (several records may share one residual
    prime, and each occurrence counts).  delta_star is read off the exact
    cumulative curve, not the reporting grid.
    """
    _check_x(x)
    if not 0 < tail_tolerance < 1:
        raise ValueError("tail_tolerance must be in (0, 1)")
    recs = _interval_records(x, records, segment_size, workers)
    top = 4 * x * x + 1
    counts = incidence_counts(x, top, with_prime_powers, records=recs)
    base_prime: dict[int, int] = {}
    if with_prime_powers:
        # power keys p^k weigh log p, not log d; plain prime keys need no map
        for rec in recs:
            for p, e in rec.factors:
                d = p
                for _ in range(e - 1):
                    d *= p
                    if d > top:
                        break
                    base_prime[d] = p
    total = lhs_logsum(x)
    acc = KahanSum()
    cumulative: list[Tuple[int, float]] = []
    for d, count in sorted(counts.items()):
        acc.add(math.log(base_prime.get(d, d)) * count)
        cumulative.append((d, acc.total))
    points = []
    idx = 0
    running = 0.0
    for delta in DELTA_GRID:
        y = min(power_cutoff(x, delta, limit=None), top)
        while idx < len(cumulative) and cumulative[idx][0] <= y:
            running = cumulative[idx][1]
            idx += 1
        points.append((y, running, running / total if total else 0.0))
    final = cumulative[-1][1] if cumulative else 0.0
    points.append((top, final, final / total if total else 0.0))
    threshold = (1.0 - tail_tolerance) * total
    delta_star = None
    for d, c in cumulative:
        if c >= threshold:
            delta_star = math.log(d) / math.log(x) - 1.0 if x > 1 else 0.0
            break
    return CoverageCurve(
        x=x,
        with_prime_powers=with_prime_powers,
        tail_tolerance=tail_tolerance,
        total=total,
        points=tuple(points),
        delta_star=delta_star,
    )


def contradiction_probe(
    x: int,
    delta: float,
    records: Optional[Iterable[FactorizationRecord]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> ChainLedger:
    """Evaluate both sides of the truncated inequality at one delta.

    Emits the truncated incidence sum, R and S, the margin 2x log x - (R+S)
    whose sign flip across delta is the contradiction mechanism, and the
    ground-truth margin lhs_exact - n_trunc.
    """
    _check_x(x)
    if x < 2:
        raise ValueError("x must be >= 2")
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must be in [0, 1]")
    cutoff = power_cutoff(x, delta)
    recs = _interval_records(x, records, segment_size, workers)
    ledger = lambda_identity_check(x, records=recs)
    counts = incidence_counts(x, cutoff, False, records=recs)
    acc = KahanSum()
    for p, count in sorted(counts.items()):
        acc.add(math.log(p) * count)
    r_value, _ = primary_term(x, delta)
    s_value = secondary_term(x, delta).total
    return ChainLedger(
        x=x,
        lhs_exact=ledger.lhs_exact,
        lhs_main_term=ledger.lhs_main_term,
        lambda_side=ledger.lambda_side,
        delta=delta,
        cutoff=cutoff,
        n_trunc=acc.total,
        R=r_value,
        S=s_value,
        margin=ledger.lhs_main_term - (r_value + s_value),
        margin_exact=ledger.lhs_exact - acc.total,
    )


def largest_prime_probe(
    x: int,
    records: Optional[Iterable[FactorizationRecord]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> ProbeResult:
    """Maximum of P(n^2+1) over (x, 2x], its exponent, and the x^(3/2) test.

    The interval membership test max_p >= x^(3/2) is done in exact integers
    as max_p^2 >= x^3; the upper end 4x^2+1 holds trivially.  No asymptotic
    assertion is attached to the result.
    """
    _check_x(x)
    if x < 2:
        raise ValueError("x must be >= 2 so the exponent is defined")
    recs = _interval_records(x, records, segment_size, workers)
    best = max(recs, key=lambda rec: rec.largest_prime)
    max_prime = best.largest_prime
    return ProbeResult(
        x=x,
        max_prime=max_prime,
        arg_n=best.n,
        exponent=math.log(max_prime) / math.log(x),
        in_interval=max_prime * max_prime >= x**3,
    )
