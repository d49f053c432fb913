import cmath
import math
from functools import lru_cache

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from circlemethod.cutoffs import ETA0, evaluate
from circlemethod.vaughan import (
    VaughanParams,
    decompose,
    g_array,
    g_weight,
    vaughan_identity_check,
)


@lru_cache(maxsize=None)
def mangoldt(n):
    if n < 2:
        return 0.0
    f = sympy.factorint(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def mobius(n):
    return int(sympy.mobius(n))


def identity_rhs(n, U, V):
    """Right side of the four-term identity at one n, by divisor enumeration."""
    total = mangoldt(n) if n <= V else 0.0
    for d in sympy.divisors(n):
        m = n // d
        mu = mobius(d)
        if mu == 0:
            continue
        if d <= U:
            total += mu * math.log(m)
            # mu_small * lam_small * 1 at n: sum over d | n, b | n/d, b <= V
            total -= mu * sum(mangoldt(b) for b in sympy.divisors(m) if b <= V)
        else:
            total += mu * sum(mangoldt(b) for b in sympy.divisors(m) if b > V)
    return total


@pytest.mark.parametrize("U,V", [(10, 10), (10, 40), (40, 10), (3, 7)])
def test_identity_matches_divisor_enumeration(U, V):
    for n in list(range(1, 400)) + [1024, 2310, 9973, 30030]:
        assert identity_rhs(n, U, V) == pytest.approx(mangoldt(n), abs=1e-9)
    check = vaughan_identity_check(400, U, V)
    assert check.passed and check.lhs <= 1e-9


def test_identity_small_primes_collapse():
    # for p <= V only the Lambda_small term and the two U-terms with d = 1 survive
    for p in (2, 3, 5, 7):
        assert identity_rhs(p, 10, 10) == pytest.approx(math.log(p), abs=1e-12)


@pytest.mark.parametrize("U", [10, 40, 100])
@pytest.mark.parametrize("V", [10, 40, 100])
def test_identity_grid(U, V):
    check = vaughan_identity_check(10 ** 5, U, V)
    assert check.passed, check.details


def test_identity_cap():
    from circlemethod.arith import ResourceError

    with pytest.raises(ResourceError):
        vaughan_identity_check(10 ** 6 + 1, 10, 10)


def test_g_weight_examples():
    assert g_weight(1, 40).value == 0.0
    for p in (41, 101, 7919):
        assert g_weight(p, 40).value == pytest.approx(0.5 * math.log(p), rel=1e-14)
    # 2^6 = 64 is the only prime power divisor above 40
    assert g_weight(64, 40).value == pytest.approx(math.log(2) - 3 * math.log(2))
    with pytest.raises(ValueError):
        g_weight(0, 40)


def test_g_array_matches_g_weight():
    for V in (40, 1000):
        g = g_array(5000, V)
        for w in (1, 2, 64, 1001, 1024, 2401, 4999, 5000):
            assert g[w] == pytest.approx(g_weight(w, V).value, abs=1e-12)


@pytest.mark.parametrize("V", [40, 1000])
def test_g_bound_up_to_a_million(V):
    n = 10 ** 6
    g = g_array(n, V)
    half_log = 0.5 * np.log(np.arange(1, n + 1, dtype=float))
    assert np.all(np.abs(g[1:]) <= half_log + 1e-9)


@given(st.integers(1, 10 ** 7), st.sampled_from([40, 1000]))
@settings(max_examples=200, deadline=None)
def test_g_bound_property(w, V):
    assert abs(g_weight(w, V).value) <= 0.5 * math.log(w) + 1e-12


def F(n, x, alpha):
    if n % 2 == 0:
        return 0j
    e = float(evaluate(ETA0, np.array([n / x]))[0])
    return cmath.exp(2j * math.pi * ((alpha * n) % 1.0)) * e if e else 0j


def brute_decomposition(x, alpha, U, V):
    top = math.floor(x)
    vals = {n: F(n, x, alpha) for n in range(1, top + 1)}
    t1 = 0.0
    parts = {}
    for d in range(1, math.floor(U * V) + 1):
        A = sum(math.log(n) * vals[d * n] for n in range(1, top // d + 1))
        B = sum(vals[d * n] for n in range(1, top // d + 1))
        t1 += abs(A) + math.log(d) * abs(B)
        parts[d] = (A, B)
    t2 = 0j
    for d in range(math.floor(U) + 1, top + 1):
        mu = mobius(d)
        if mu == 0:
            continue
        for w in range(math.floor(V) + 1, top // d + 1):
            v = vals[d * w]
            if v:
                t2 += mu * g_weight(w, V).value * v
    target = sum(mangoldt(n) * v for n, v in vals.items())
    return t1, abs(t2), parts, abs(target)


@pytest.mark.parametrize("alpha", [0.0, 0.1234567, 0.31, 1 / 7 + 1e-5])
def test_decompose_matches_brute_force(alpha):
    x, U, V = 8000.0, 40.0, 40.0
    dec = decompose(x, alpha, VaughanParams(U, V))
    t1, t2, parts, target = brute_decomposition(x, alpha, U, V)
    assert dec.T_I == pytest.approx(t1, rel=1e-9)
    assert dec.T_II == pytest.approx(t2, rel=1e-9, abs=1e-9)
    assert dec.check.lhs == pytest.approx(target, rel=1e-9, abs=1e-9)
    assert dec.check.hypotheses_ok
    assert dec.check.passed
    # the emitted phase turns the triangle inequality into an equality
    for d, c in zip(dec.divisors, dec.c_d):
        A, B = parts[d]
        assert abs(A + c * math.log(d) * B) == pytest.approx(abs(A) + math.log(d) * abs(B), rel=1e-9)


def test_unimodular_coefficients():
    dec = decompose(1e5, 0.2718, VaughanParams(40, 40))
    assert dec.c_d
    assert np.allclose(np.abs(dec.c_d), 1.0, atol=1e-12)


def test_identity_residual_is_small():
    dec = decompose(1e5, 0.377, VaughanParams(40, 40))
    assert dec.check.details["identity_residual"] <= 1e-6 * max(1.0, dec.check.lhs)


def test_margin_at_zero_frequency():
    T_I, T_II, c_d, check = decompose(1e5, 0.0, VaughanParams(40, 40))
    assert check.margin >= 0
    assert check.rhs == pytest.approx(T_I + T_II)


def test_margin_random_frequencies():
    rng = np.random.default_rng(5)
    for alpha in rng.random(50):
        dec = decompose(1e5, float(alpha), VaughanParams(40, 40))
        assert dec.check.margin >= 0, alpha


def test_new_type2_against_classical():
    rng = np.random.default_rng(11)
    for alpha in rng.random(10):
        dec = decompose(1e5, float(alpha), VaughanParams(40, 40))
        d = dec.check.details
        assert dec.T_II <= d["T_II_classical"] + d["boundary_type1"] + 1e-9


def test_hypothesis_failure_is_flagged():
    # UV = 1e4 > x/4, still computed
    dec = decompose(2e4, 0.1, VaughanParams(100, 100))
    assert not dec.check.hypotheses["UV <= x/4"]
    assert dec.check.passed is None
    assert math.isfinite(dec.T_I)


def test_params_validation():
    with pytest.raises(ValueError):
        VaughanParams(0.5, 40)
