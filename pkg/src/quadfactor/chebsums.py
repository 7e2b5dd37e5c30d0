"""Log-weighted prime sums over progressions and their two-term decomposition.

The primary term is 2x * sum(log p / p) over p = 1 (mod 4) up to a cutoff
x^(1+delta); the secondary term carries the fractional parts of (x +- b_p)/p.
All sums run over ascending primes with compensated accumulation, so results
are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .modmath import _root_for_prime, iter_primes

SIEVE_CUTOFF_MAX = 2**31


class KahanSum:
    """Compensated accumulator; deterministic for a fixed order of adds."""

    __slots__ = ("total", "_c")

    def __init__(self) -> None:
        self.total = 0.0
        self._c = 0.0

    def add(self, term: float) -> None:
        y = term - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


@dataclass(frozen=True, slots=True)
class SumLedger:
    """Everything evaluated for one (x, delta) pair."""

    x: int
    delta: float
    cutoff: int
    R: float
    S: float
    mertens: float
    residual_R: float
    residual_S: float
    term_count: int


@dataclass(frozen=True, slots=True)
class SecondaryTerms:
    """Secondary-term total plus its per-sign head/tail split.

    For each sign the tail piece covers primes where 0 <= x +- b < p, i.e.
    where the fractional part IS the plain quotient; the head piece keeps the
    generic residue form.  split_total regroups the same summands, so it must
    agree with total up to accumulation order.  mod8_variant restricts the
    plus-sign sum to p = 1 (mod 8) and is reported for comparison only.
    """

    x: int
    delta: float
    cutoff: int
    total: float
    minus_head: float
    minus_tail: float
    plus_head: float
    plus_tail: float
    split_total: float
    mod8_variant: float
    term_count: int


@dataclass(frozen=True, slots=True)
class TailBounds:
    """Term-by-term view of the fixed-b tail inequality chain.

    four_sum is the literal four-piece expansion of the tail sums for both
    signs; simplified is 2x * sum(log p / p) over the wider window
    (x-b, cutoff], which dominates it; main_term is delta * x * log x and
    residual is the measured gap simplified - main_term (its asymptotic
    constant is not asserted anywhere).
    """

    x: int
    delta: float
    b: int
    cutoff: int
    four_sum: float
    simplified: float
    main_term: float
    residual: float


def power_cutoff(x: int, delta: float, limit: Optional[int] = SIEVE_CUTOFF_MAX) -> int:
    """floor(x^(1+delta)) with a one-ulp guard band.

    math.pow is correctly rounded on this platform (and pow(x, 1) == x
    exactly), so rounding c up by one ulp before flooring means integer
    boundary values (delta = 0 giving x, or 100^1.5 giving 1000) are never
    lost to a downward rounding; membership of the boundary prime is then a
    fixed integer comparison.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if x == 1:
        return 1
    c = math.pow(x, 1.0 + delta)
    cutoff = int(math.floor(math.nextafter(c, math.inf)))
    if limit is not None and cutoff > limit:
        raise OverflowError(f"cutoff {cutoff} exceeds sieve bound {limit}")
    return cutoff


def totient(q: int) -> int:
    """Euler's phi by trial factorization (moduli here are tiny)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    result = q
    m = q
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def _check_residue(q: int, a: int) -> None:
    if q < 1:
        raise ValueError("modulus q must be >= 1")
    if math.gcd(a % q, q) != 1:
        raise ValueError(f"residue {a} is not invertible mod {q}")


def pi_counting(z: int, q: int, a: int) -> int:
    """Exact number of primes p <= z with p = a (mod q)."""
    _check_residue(q, a)
    if z < 2:
        return 0
    return sum(1 for _ in iter_primes(2, z, (q, a)))


def mertens_ap(z: int, q: int, a: int) -> float:
    """sum of log p / p over primes p <= z, p = a (mod q), ascending order."""
    _check_residue(q, a)
    acc = KahanSum()
    if z >= 2:
        for p in iter_primes(2, z, (q, a)):
            acc.add(math.log(p) / p)
    return acc.total


def primary_term(x: int, delta: float) -> tuple[float, float]:
    """2x * mertens over p = 1 (mod 4) up to x^(1+delta), and its residual
    against the main term (1+delta) * x * log x."""
    if x < 2:
        raise ValueError("x must be >= 2")
    cutoff = power_cutoff(x, delta)
    value = 2.0 * x * mertens_ap(cutoff, 4, 1)
    return value, value - (1.0 + delta) * x * math.log(x)


def secondary_term(x: int, delta: float) -> SecondaryTerms:
    """Fractional-part sum sum({(x-b)/p} + {(x+b)/p}) log p over p = 1 (mod 4).

    Each fractional part is the exact residue over p, converted to float once
    per summand.  .total adds both signs per prime; the head/tail fields split
    the same series by whether the plain-quotient form applies.  Note b can
    exceed x once p > 2x, so the minus-sign tail condition is 0 <= x-b < p,
    not just p > x-b.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    cutoff = power_cutoff(x, delta)
    total = KahanSum()
    minus_head = KahanSum()
    minus_tail = KahanSum()
    plus_head = KahanSum()
    plus_tail = KahanSum()
    minus_all = KahanSum()
    plus_mod8 = KahanSum()
    count = 0
    for p in iter_primes(2, cutoff, (4, 1)):
        count += 1
        b = _root_for_prime(p)
        logp = math.log(p)
        zm = x - b
        zp = x + b
        fm = (zm % p) / p
        fp = (zp % p) / p
        total.add((fm + fp) * logp)
        minus_all.add(fm * logp)
        if 0 <= zm < p:
            minus_tail.add(zm / p * logp)
        else:
            minus_head.add(fm * logp)
        if zp < p:
            plus_tail.add(zp / p * logp)
        else:
            plus_head.add(fp * logp)
        if p % 8 == 1:
            plus_mod8.add(fp * logp)
    split = minus_head.total + minus_tail.total + plus_head.total + plus_tail.total
    return SecondaryTerms(
        x=x,
        delta=delta,
        cutoff=cutoff,
        total=total.total,
        minus_head=minus_head.total,
        minus_tail=minus_tail.total,
        plus_head=plus_head.total,
        plus_tail=plus_tail.total,
        split_total=split,
        mod8_variant=minus_all.total + plus_mod8.total,
        term_count=count,
    )


def tail_bound_chain(x: int, delta: float, b: int) -> TailBounds:
    """Evaluate the fixed-b tail sums and the two bounds that dominate them.

    four_sum expands sum((x +- b) log p / p) over (x +- b, cutoff] into its
    four pieces; widening the plus-sign window to (x - b, cutoff] gives the
    simplified bound 2x * sum(log p / p), which four_sum never exceeds.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    if not 0 <= b < x:
        raise ValueError("need 0 <= b < x")
    cutoff = power_cutoff(x, delta)
    m_minus = KahanSum()
    m_plus = KahanSum()
    if cutoff > x - b:
        for p in iter_primes(max(x - b + 1, 2), cutoff, (4, 1)):
            term = math.log(p) / p
            m_minus.add(term)
            if p > x + b:
                m_plus.add(term)
    four_sum = x * m_minus.total - b * m_minus.total + x * m_plus.total + b * m_plus.total
    simplified = 2 * x * m_minus.total
    main_term = delta * x * math.log(x)
    return TailBounds(
        x=x,
        delta=delta,
        b=b,
        cutoff=cutoff,
        four_sum=four_sum,
        simplified=simplified,
        main_term=main_term,
        residual=simplified - main_term,
    )


def sum_ledger(x: int, delta: float) -> SumLedger:
    """Evaluate the full (x, delta) ledger.

    R is 2x times the mertens value by construction (same accumulation), and
    term_count re-counts the identical prime set.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    cutoff = power_cutoff(x, delta)
    mertens = mertens_ap(cutoff, 4, 1)
    r_value = 2.0 * x * mertens
    sec = secondary_term(x, delta)
    xlogx = x * math.log(x)
    return SumLedger(
        x=x,
        delta=delta,
        cutoff=cutoff,
        R=r_value,
        S=sec.total,
        mertens=mertens,
        residual_R=r_value - (1.0 + delta) * xlogx,
        residual_S=sec.total - delta * xlogx,
        term_count=sec.term_count,
    )
