"""Exact integer substrate: primality, prime streams, and roots of -1.

Everything here is deterministic and validated against the 64-bit contract:
values such as p^k or hi^2+1 must stay below 2^64, and callers get an
OverflowError instead of silent wraparound semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Tuple

U64_MAX = 2**64 - 1
DEFAULT_SEGMENT_SIZE = 1 << 20

# Witnesses proven sufficient for deterministic Miller-Rabin below 2^64
# (Sinclair / Feitsma-verified base set).
_MR_WITNESSES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

_TINY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True, slots=True)
class RootPair:
    """A prime p = 1 (mod 4) together with the root b of b^2 = -1 (mod p).

    Only the representative in (0, p/2) is stored; the second root is p - b.
    Primality of p is the constructor's caller contract (sqrt_minus_one
    checks it); the root relation and normalization are re-validated here.
    """

    p: int
    b: int

    def __post_init__(self) -> None:
        if self.p % 4 != 1:
            raise ValueError(f"p={self.p} is not 1 mod 4")
        if not 0 < 2 * self.b < self.p:
            raise ValueError(f"root {self.b} outside (0, {self.p}/2)")
        if (self.b * self.b + 1) % self.p:
            raise ValueError(f"{self.b}^2 + 1 is not divisible by {self.p}")


@dataclass(frozen=True, slots=True)
class PrimePowerRoot:
    """A root r of r^2 = -1 modulo m = p^k, normalized to (0, m/2)."""

    p: int
    k: int
    m: int
    r: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.m != self.p**self.k:
            raise ValueError(f"modulus {self.m} is not {self.p}^{self.k}")
        if self.m > U64_MAX:
            raise OverflowError(f"{self.p}^{self.k} does not fit in 64 bits")
        if not 0 < 2 * self.r < self.m:
            raise ValueError(f"root {self.r} outside (0, {self.m}/2)")
        if (self.r * self.r + 1) % self.m:
            raise ValueError(f"{self.r}^2 + 1 is not divisible by {self.m}")


def mulmod(a: int, b: int, m: int) -> int:
    """a*b mod m, exact for any 64-bit operands."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    return (a * b) % m


def powmod(a: int, e: int, m: int) -> int:
    """a^e mod m with e >= 0, exact for any 64-bit operands."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if e < 0:
        raise ValueError("exponent must be >= 0")
    return pow(a, e, m)


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^64."""
    if n < 0 or n > U64_MAX:
        raise ValueError("is_prime is specified for 64-bit unsigned inputs")
    if n < 2:
        return False
    for p in _TINY_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=32)
def _base_primes(limit: int) -> Tuple[int, ...]:
    """One-shot sieve up to limit inclusive, for seeding segmented runs."""
    if limit < 2:
        return ()
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return tuple(i for i, f in enumerate(flags) if f)


def iter_primes(
    lo: int,
    hi: int,
    residue_filter: Optional[Tuple[int, int]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> Iterator[int]:
    """Yield the primes in [lo, hi] in ascending order.

    An optional residue_filter (q, a) restricts the stream to p = a (mod q);
    gcd(a, q) must be 1.  Work proceeds in fixed-size segments so memory stays
    O(segment_size) regardless of the range.
    """
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    if segment_size < 1:
        raise ValueError("segment_size must be >= 1")
    q = a = 0
    if residue_filter is not None:
        q, a = residue_filter
        if q < 1:
            raise ValueError("modulus q must be >= 1")
        a %= q
        if math.gcd(a, q) != 1:
            raise ValueError(f"residue {a} is not invertible mod {q}")
    lo = max(lo, 2)
    if lo > hi:
        return
    base = _base_primes(math.isqrt(hi))
    for seg_lo in range(lo, hi + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, hi)
        flags = bytearray(b"\x01") * (seg_hi - seg_lo + 1)
        for p in base:
            if p * p > seg_hi:
                break
            start = max(p * p, (seg_lo + p - 1) // p * p)
            if start <= seg_hi:
                flags[start - seg_lo :: p] = b"\x00" * ((seg_hi - start) // p + 1)
        pos = flags.find(1)
        while pos != -1:
            n = seg_lo + pos
            if residue_filter is None or n % q == a:
                yield n
            pos = flags.find(1, pos + 1)


def primes_in(
    lo: int,
    hi: int,
    residue_filter: Optional[Tuple[int, int]] = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> list[int]:
    """List form of iter_primes."""
    return list(iter_primes(lo, hi, residue_filter, segment_size))


@lru_cache(maxsize=1 << 20)
def _root_for_prime(p: int) -> int:
    """Root of -1 for p already known to be prime and 1 (mod 4).

    Bulk callers feeding sieve output use this directly; sqrt_minus_one adds
    the input validation.  Smallest nonresidue z by ascending search (only a
    prime can be the smallest one); then z^((p-1)/4) squares to
    z^((p-1)/2) = -1 by Euler's criterion.  2 is a nonresidue exactly when
    p = +-3 (mod 8), so p = 5 (mod 8) resolves without any Euler test.
    """
    e = (p - 1) // 2
    if p % 8 == 5:
        z = 2
    else:
        z = 3
        while pow(z, e, p) != p - 1:
            z = _next_candidate(z)
    b = pow(z, e // 2, p)
    return min(b, p - b)


def _next_candidate(z: int) -> int:
    i = _TINY_PRIMES.index(z) if z in _TINY_PRIMES else -1
    if 0 <= i < len(_TINY_PRIMES) - 1:
        return _TINY_PRIMES[i + 1]
    return z + 2


def sqrt_minus_one(p: int) -> RootPair:
    """The normalized root pair of n^2 + 1 = 0 (mod p) for prime p = 1 (mod 4)."""
    if p % 4 != 1:
        raise ValueError(f"p={p} is not 1 mod 4; n^2+1 has no root mod p")
    if not is_prime(p):
        raise ValueError(f"p={p} is composite")
    return RootPair(p=p, b=_root_for_prime(p))


def hensel_lift(root: RootPair, k: int) -> PrimePowerRoot:
    """Lift a root of -1 mod p to the unique class mod p^k, normalized.

    Linear Newton steps: the derivative 2r is invertible mod p because p is
    odd, so each step is exact and the lift is unique up to sign.
    """
    if k < 1:
        raise ValueError("exponent k must be >= 1")
    p = root.p
    m = p**k
    if m > U64_MAX:
        raise OverflowError(f"{p}^{k} does not fit in 64 bits")
    r = root.b
    pj = p
    for _ in range(k - 1):
        step = (-((r * r + 1) // pj) * pow(2 * r, -1, p)) % p
        r += step * pj
        pj *= p
    return PrimePowerRoot(p=p, k=k, m=m, r=min(r, m - r))
