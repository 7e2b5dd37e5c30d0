import math

import pytest

from quadfactor.chebsums import KahanSum, power_cutoff
from quadfactor.modmath import hensel_lift, iter_primes, sqrt_minus_one
from quadfactor.polysieve import sieve_segment
from quadfactor.rootcount import count_in_class, count_root_classes
from quadfactor.verifier import (
    contradiction_probe,
    coverage_curve,
    lambda_identity_check,
    lhs_logsum,
    largest_prime_probe,
)

from oracles import trial_division_factor


def test_lhs_logsum_single_term():
    assert lhs_logsum(1) == pytest.approx(math.log(5), rel=1e-15)


def test_lhs_logsum_main_term_band():
    value = lhs_logsum(10**3)
    assert abs(value - 2 * 10**3 * math.log(10**3)) < 3 * 10**3


def test_lhs_logsum_stable_normalized_gap():
    gaps = []
    for x in (10**5, 10**6):
        gaps.append((lhs_logsum(x) - 2 * x * math.log(x)) / x)
    assert gaps[0] / gaps[1] < 1.5 and gaps[1] / gaps[0] < 1.5
    # the gap approaches 2(2 log 2 - 1)
    assert gaps[1] == pytest.approx(2 * (2 * math.log(2) - 1), abs=1e-2)


def test_lambda_identity_single_value():
    # log 50 = log 2 + 2 log 5
    assert math.log(50) == pytest.approx(math.log(2) + 2 * math.log(5), rel=1e-12)
    led = lambda_identity_check(50)
    assert abs(led.lhs_exact - led.lambda_side) / led.lhs_exact <= 1e-12


def test_lambda_identity_x1e5():
    led = lambda_identity_check(10**5)
    assert abs(led.lhs_exact - led.lambda_side) / led.lhs_exact <= 1e-9


def test_progression_route_reproduces_logsum():
    # Rebuild the full log sum from counting alone: every prime power
    # d = p^k <= 4x^2+1 contributes log p times its progression count; no
    # factorization of any individual n is involved.
    for x in (100, 123):
        top = 4 * x * x + 1
        acc = KahanSum()
        acc.add(math.log(2) * count_in_class(x, 2, 1))  # 4 never divides n^2+1
        for p in iter_primes(5, top, (4, 1)):
            root = sqrt_minus_one(p)
            acc.add(math.log(p) * count_root_classes(x, p, root.b))
            k = 2
            while p**k <= top:
                lifted = hensel_lift(root, k)
                acc.add(math.log(p) * count_root_classes(x, lifted.m, lifted.r))
                k += 1
        assert acc.total == pytest.approx(lhs_logsum(x), rel=1e-12)


def test_coverage_complete_with_prime_powers():
    curve = coverage_curve(100, with_prime_powers=True)
    ys = [y for y, _, _ in curve.points]
    rhos = [rho for _, _, rho in curve.points]
    assert ys == sorted(ys)
    assert rhos == sorted(rhos)
    assert rhos[-1] == pytest.approx(1.0, abs=1e-9)
    assert curve.points[-1][0] == 4 * 100 * 100 + 1
    assert curve.delta_star is not None


def test_coverage_prime_power_mass_is_small_but_real():
    with_powers = coverage_curve(100, with_prime_powers=True)
    without = coverage_curve(100, with_prime_powers=False)
    dropped = with_powers.points[-1][2] - without.points[-1][2]
    assert 0 < dropped < 0.05
    # at the default tolerance the powerless curve never reaches the target
    assert without.delta_star is None


def test_coverage_delta_star_tolerance_monotone():
    stars = []
    for tol in (1e-1, 1e-2, 1e-3):
        curve = coverage_curve(200, with_prime_powers=True, tail_tolerance=tol)
        assert curve.delta_star is not None
        stars.append(curve.delta_star)
    assert stars == sorted(stars)


def test_contradiction_probe_truncated_bound():
    records = sieve_segment(10**3 + 1, 2 * 10**3)
    for delta in (0.0, 0.25, 0.5):
        led = contradiction_probe(10**3, delta, records=records)
        assert led.n_trunc <= led.R + led.S
        assert led.margin == led.lhs_main_term - (led.R + led.S)
        assert led.cutoff == power_cutoff(10**3, delta)


def test_contradiction_probe_full_cutoff_margin():
    led = contradiction_probe(10**3, 1.0)
    # only primes above x^2 are missing from the truncated sum
    assert 0 < led.margin_exact < 0.3 * led.lhs_exact


def test_margin_sign_flips_across_half():
    low = contradiction_probe(10**3, 0.0)
    high = contradiction_probe(10**3, 0.5)
    assert low.margin > 0 > high.margin


def test_largest_prime_probe_x10():
    probe = largest_prime_probe(10)
    assert probe.max_prime == 401 and probe.arg_n == 20
    assert probe.exponent == pytest.approx(math.log(401) / math.log(10))
    assert probe.in_interval  # 401 >= 10^1.5


def test_largest_prime_probe_against_oracle():
    x = 100
    oracle_best = max(
        max(p for p, _ in trial_division_factor(n * n + 1))
        for n in range(x + 1, 2 * x + 1)
    )
    probe = largest_prime_probe(x)
    assert probe.max_prime == oracle_best
    assert probe.in_interval == (probe.max_prime**2 >= x**3)
    assert probe.in_interval


def test_largest_prime_probe_larger_scale_reported():
    # the interval-membership outcome at real scale is a measurement; only
    # basic shape is asserted here
    probe = largest_prime_probe(10**4)
    assert probe.max_prime > 10**4
    assert probe.exponent > 1.0
    assert isinstance(probe.in_interval, bool)


def test_validation():
    with pytest.raises(ValueError):
        lhs_logsum(0)
    with pytest.raises(OverflowError):
        lhs_logsum(2**31)
    with pytest.raises(ValueError):
        contradiction_probe(100, 1.5)
    with pytest.raises(ValueError):
        coverage_curve(100, tail_tolerance=0.0)
