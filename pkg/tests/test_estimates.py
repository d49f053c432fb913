import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlemethod import estimates as est
from circlemethod.cutoffs import ETA0, ETA1
from circlemethod.expsum import SumSpec, l2_exact

F0 = est.ScaledCutoff(ETA0, 1e3)


def ok(check):
    return check.passed is not False and check.margin >= 0


def test_linear_sum_checks():
    c = est.poisson_bounds_check(F0, 0.0, 0)
    assert c.rhs == pytest.approx(0.5 * 8 * math.log(2))
    assert ok(c)
    assert ok(est.poisson_bounds_check(F0, 0.5, 1))
    for a in np.random.default_rng(0).uniform(0.1, 0.9, 50):
        assert ok(est.poisson_bounds_check(F0, float(a), 2))
    # an integer frequency makes the k >= 1 bound infinite
    assert est.poisson_bounds_check(F0, 1.0, 1).rhs == math.inf


def test_odd_restricted_checks():
    # sin(2 pi alpha) vanishes at alpha = 1/2, not at 1/4
    c = est.odd_restricted_check(F0, 0.5, 1)
    assert c.rhs == math.inf and c.passed
    assert ok(est.odd_restricted_check(F0, 0.25, 1))
    assert ok(est.odd_restricted_check(F0, 1 / 3, 1))
    assert ok(est.odd_restricted_check(F0, 0.0, 0))
    for a in np.random.default_rng(1).uniform(0.01, 0.49, 40):
        for k in (1, 2):
            assert ok(est.odd_restricted_check(F0, float(a), k))


def test_vinogradov_examples():
    assert ok(est.vinogradov_sum(0.2, (1, 5, 0.0), 0, 5, 1, 1))
    assert ok(est.vinogradov_sum(0.2, (1, 5, 0.0), 0, 50, 1e6, 0))
    bad = est.vinogradov_sum(0.2, (1, 5, 0.1), 0, 5, 1, 1)
    assert bad.passed is None


def _random_vino(rng, odd):
    q = int(rng.integers(1, 200))
    a = int(rng.integers(0, q))
    while math.gcd(a, q) != 1:
        a = int(rng.integers(0, q))
    beta = float(rng.uniform(-1, 1)) / q ** 2 * 10.0 ** -rng.uniform(0, 6)
    target = a / q + beta
    alpha = target / 2 if odd else target
    x = float(rng.uniform(0, 1e4))
    y = x + float(rng.uniform(1, 5e3))
    A = float(10 ** rng.uniform(-1, 4))
    B = float(10 ** rng.uniform(-1, 4))
    theta = float(rng.uniform(-math.pi, math.pi))
    return est.vinogradov_sum(alpha, (a, q, beta), x, y, A, B, theta, odd_only=odd)


def test_vinogradov_randomized():
    rng = np.random.default_rng(2024)
    checks = [_random_vino(rng, odd) for odd in (False, True) for _ in range(150)]
    assert all(c.hypotheses_ok for c in checks)
    assert min(c.margin for c in checks) >= 0


def test_large_sieve_examples():
    a = np.zeros(50, dtype=complex)
    a[0] = 1
    c = est.large_sieve_check([0.3], (1, 50), a, delta=0.5)
    assert c.lhs == pytest.approx(1) and ok(c)
    rng = np.random.default_rng(7)
    a = rng.normal(size=51) + 1j * rng.normal(size=51)
    assert ok(est.large_sieve_check(np.arange(7) / 7, (0, 50), a))
    too_close = est.large_sieve_check([0.1, 0.2], (0, 50), a, delta=0.2)
    assert too_close.passed is None


def test_large_sieve_randomized():
    rng = np.random.default_rng(99)
    margins = []
    for _ in range(250):
        n = int(rng.integers(2, 201))
        pts = rng.uniform(0, 1, int(rng.integers(1, 21)))
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        c = est.large_sieve_check(pts, (1, n), a)
        assert c.hypotheses_ok
        margins.append(c.margin)
    assert min(margins) >= 0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_large_sieve_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 80))
    pts = rng.uniform(0, 1, int(rng.integers(1, 12)))
    c = est.large_sieve_check(pts, (0, n - 1), rng.normal(size=n))
    assert c.margin >= 0


def test_bilinear_examples():
    ones_i, ones_j = np.ones(101), np.ones(101)
    c = est.bilinear_checks("special", (0, 100), (0, 100), 0.0, 1, ones_i, ones_j)
    assert c.rhs == math.inf and c.passed
    rng = np.random.default_rng(8)
    a = rng.choice([-1.0, 1.0], 101)
    b = rng.choice([-1.0, 1.0], 101)
    for variant in ("special", "odd", "subdivided"):
        assert ok(est.bilinear_checks(variant, (0, 100), (0, 100), 1 / 11, 5, a, b))
    assert ok(est.bilinear_checks("subdivided", (0, 100), (0, 100), 1 / 11, 11 / 2, a, b))
    with pytest.raises(ValueError):
        est.bilinear_checks("other", (0, 100), (0, 100), 0.1, 1, a, b)


def test_bilinear_randomized():
    rng = np.random.default_rng(5)
    for _ in range(200):
        li, lj = int(rng.integers(2, 80)), int(rng.integers(2, 80))
        a = rng.normal(size=li + 1)
        b = rng.normal(size=lj + 1)
        alpha = float(rng.uniform(0, 1))
        M = float(rng.integers(1, 10))
        for variant in ("special", "odd", "subdivided"):
            c = est.bilinear_checks(variant, (0, li), (0, lj), alpha, M, a, b)
            assert c.margin >= 0


def test_uncertainty_principle():
    spec = SumSpec(1e4, ETA1, q0=6)
    c = est.montgomery_uncertainty_check(spec, 0.3, 1)
    assert c.lhs == pytest.approx(c.rhs, rel=1e-9)
    for a in np.random.default_rng(3).uniform(0, 1, 20):
        assert ok(est.montgomery_uncertainty_check(spec, float(a), 3))
    c = est.montgomery_uncertainty_check(SumSpec(1e4, ETA1, q0=2), 0.1, 4)
    assert c.lhs == 0 and ok(c)


def test_uncertainty_sixty_cases():
    rng = np.random.default_rng(12)
    spec = SumSpec(1e5, ETA1, primorial=math.sqrt(1e5))
    moduli = [1, 2, 3, 5, 6, 7, 10, 15, 30, 42, 105, 210]
    checks = [est.montgomery_uncertainty_check(spec, float(rng.uniform(0, 1)), int(rng.choice(moduli))) for _ in range(60)]
    assert all(c.hypotheses_ok for c in checks)
    assert min(c.margin for c in checks) >= 0


def test_G():
    assert est.G(6) == Fraction(13, 4)
    for R in (1, 2, 6, 30, 100, 1000):
        assert float(est.G(R)) >= math.log(R)


def test_local_mean_square():
    spec = SumSpec(1e4, ETA1, primorial=100)
    c = est.local_l2_bound(spec, 1, 1)
    assert c.passed
    c = est.local_l2_bound(spec, 3, 5)
    assert c.hypotheses_ok and c.margin >= 0


def test_arc_integral_is_exact():
    spec = SumSpec(3000, ETA0)
    assert est.arc_l2(spec, [(0, 1)], 0.5) == pytest.approx(l2_exact(spec), rel=1e-10)
    # compare a short arc with a fine Riemann sum of |S|^2
    from circlemethod.expsum import s_eval_many

    r = 0.01
    al = np.linspace(-r, r, 40001)
    vals = np.abs(s_eval_many(spec, al)) ** 2
    riemann = float(np.trapezoid(vals, al)) if hasattr(np, "trapezoid") else float(np.trapz(vals, al))
    assert est.arc_l2(spec, [(0, 1)], r) == pytest.approx(riemann, rel=1e-6)


def test_uplow_and_downlow():
    x = 1e5
    spec = SumSpec(x, ETA1, primorial=math.sqrt(x))
    c = est.uplow_bound(spec, 50 / x)
    assert c.hypotheses_ok and c.margin >= 0
    c = est.l2_lower_bound(spec, 0.5)
    assert c.rhs == pytest.approx(l2_exact(spec), rel=1e-10) and c.margin >= 0
    c = est.l2_lower_bound(SumSpec(x, ETA1), 1e-3)
    assert c.hypotheses_ok and c.margin >= 0


def test_cleaned_up_lower_bound_side_conditions():
    x = 8.7e36
    r = 3.29e9 / (3.6 * math.pi * x)
    hyps = est.downlow2_hypotheses(x, ETA1, r)
    assert len(hyps) == 6 and all(hyps.values())
    assert not all(est.downlow2_hypotheses(1e5, ETA1, 0.4).values())


def test_meso_bound():
    spec = SumSpec(1e7, ETA1, primorial=math.sqrt(1e7))
    c = est.meso_bound(spec, 100)
    assert c.hypotheses_ok and c.margin >= 0
    assert est.meso_eps(1e20, math.floor(4e14 / 3)) < 0.001
    assert est.meso_bound(spec, 50).passed is None


@pytest.mark.parametrize("x, H", [(1e4, 100), (1e5, 150)])
def test_meso_two_ways(x, H):
    spec = SumSpec(x, ETA1, primorial=math.sqrt(x))
    assert est.meso_lhs(spec, H) == pytest.approx(est.meso_lhs_quadrature(spec, H), rel=1e-6)


def test_twin_prime_constant():
    value, lo, hi = est.twin_prime_constant(10 ** 7)
    assert lo <= value <= hi
    assert 1.32032 <= lo and hi <= 1.32033


def test_prime_pair_counts():
    c = est.siebert_empirical(1e6, 2)
    assert c.lhs == 8169 and ok(c)
    assert ok(est.siebert_empirical(1e6, 6))
    c = est.siebert_empirical(1e6, 3)
    assert c.passed is None and c.lhs <= 1
