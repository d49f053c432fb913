import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from circlemethod import arith


def lambda_oracle(n):
    f = sympy.factorint(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def test_small_values():
    t = arith.sieve(1, 30)
    assert t.lam_at(8) == pytest.approx(math.log(2), abs=1e-15)
    assert t.mobius_at(30) == -1
    assert t.lam_at(1) == 0
    assert t.mobius_at(1) == 1
    assert t.mobius_at(12) == 0
    assert list(np.flatnonzero(t.is_prime) + 1) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_mangoldt_sum_against_trial_division():
    t = arith.sieve(1, 10 ** 4)
    direct = math.fsum(lambda_oracle(n) for n in range(2, 10 ** 4 + 1))
    assert math.fsum(t.lam.tolist()) == pytest.approx(direct, rel=1e-9)


def test_divisor_sums():
    n_max = 10 ** 4
    t = arith.sieve(1, n_max)
    lam_conv = np.zeros(n_max + 1)
    mu_conv = np.zeros(n_max + 1)
    for d in range(1, n_max + 1):
        lam_conv[d::d] += t.lam[d - 1]
        mu_conv[d::d] += t.mobius[d - 1]
    logs = np.log(np.arange(1, n_max + 1))
    assert np.max(np.abs(lam_conv[1:] - logs)) <= 1e-9
    expected = np.zeros(n_max)
    expected[0] = 1
    assert np.array_equal(mu_conv[1:], expected)


def test_mobius_matches_sympy():
    t = arith.sieve(1, 3000)
    assert all(int(t.mobius_at(n)) == sympy.mobius(n) for n in range(1, 3001))


@settings(max_examples=30, deadline=None)
@given(lo=st.integers(1, 10 ** 7), width=st.integers(1, 5000), cut=st.integers(1, 4999))
def test_windows_agree_on_overlap(lo, width, cut):
    cut = min(cut, width)
    whole = arith.sieve(lo, lo + width)
    part = arith.sieve(lo + cut, lo + width)
    assert np.array_equal(whole.lam[cut:], part.lam)
    assert np.array_equal(whole.mobius[cut:], part.mobius)
    assert np.array_equal(whole.is_prime[cut:], part.is_prime)


def test_segment_size_does_not_matter():
    a = arith.sieve(10 ** 6, 10 ** 6 + 20000)
    b = arith.sieve(10 ** 6, 10 ** 6 + 20000, segment=777)
    assert np.array_equal(a.lam, b.lam) and np.array_equal(a.mobius, b.mobius)


def test_window_budget_and_bad_bounds():
    with pytest.raises(arith.ResourceError):
        arith.sieve(1, 100, max_window=50)
    with pytest.raises(ValueError):
        arith.sieve(0, 10)
    with pytest.raises(ValueError):
        arith.sieve(10, 5)


def test_dump_roundtrip(tmp_path):
    t = arith.sieve(999, 5000)
    path = tmp_path / "window.bin"
    t.dump(path)
    u = arith.ArithTable.load(path)
    assert (u.lo, u.hi) == (999, 5000)
    assert np.array_equal(t.lam, u.lam) and np.array_equal(t.mobius, u.mobius)
    assert np.array_equal(t.is_prime, u.is_prime)
    path.write_bytes(b"garbage" + path.read_bytes()[7:])
    with pytest.raises(ValueError):
        arith.ArithTable.load(path)


def test_euler_phi():
    assert arith.euler_phi(1) == 1
    assert arith.euler_phi(9) == 6
    for n in range(1, 10 ** 4, 2):
        assert arith.euler_phi(2 * n) == arith.euler_phi(n)
    for n in range(1, 500):
        assert arith.euler_phi(n) == sympy.totient(n)


def test_primorial_coprimality():
    assert arith.coprime_to_primorial(15, 2)
    assert not arith.coprime_to_primorial(15, 3)
    assert arith.coprime_to_primorial(1, 100)
    n_max = 10 ** 5
    Q = math.sqrt(n_max)
    ns = np.arange(1, n_max + 1)
    mask = arith.PrimorialCondition(Q).mask(ns)
    spf = [min(sympy.factorint(int(n))) if n > 1 else math.inf for n in ns[:5000]]
    assert list(mask[:5000]) == [s > Q for s in spf]
    # oracle for the full count: 1 plus the primes in (Q, n_max]
    assert int(mask.sum()) == 1 + int(sympy.primepi(n_max) - sympy.primepi(int(Q)))


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 10 ** 6), Q=st.floats(0, 200))
def test_primorial_membership_property(n, Q):
    expect = n == 1 or min(sympy.factorint(n)) > Q
    assert arith.coprime_to_primorial(n, Q) == expect
    assert bool(arith.PrimorialCondition(Q).mask([n])[0]) == expect


def test_chebyshev_psi_small():
    assert arith.chebyshev_psi(1) == 0
    expected = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
    assert arith.chebyshev_psi(10) == pytest.approx(expected, rel=1e-14)
    assert arith.chebyshev_theta(10) == pytest.approx(math.log(210), rel=1e-14)


def test_chebyshev_psi_matches_sieve():
    t = arith.sieve(1, 200000)
    assert arith.chebyshev_psi(200000) == pytest.approx(math.fsum(t.lam.tolist()), rel=1e-12)


@pytest.mark.parametrize("y", [1e3, 1e4, 1e5, 1e6, 1e7, 1e8])
def test_psi_at_most_1_04_y(y):
    assert arith.chebyshev_psi(y) <= 1.04 * y


def test_is_prime_u64():
    assert arith.is_prime_u64(2)
    assert not arith.is_prime_u64(561)
    assert not arith.is_prime_u64(1) and not arith.is_prime_u64(0)
    n = 10 ** 12 + 39
    trial = all(n % d for d in range(2, 10 ** 6 + 1))
    assert arith.is_prime_u64(n) == trial == sympy.isprime(n)
    assert arith.is_prime_u64(2 ** 64 - 59)
    assert not arith.is_prime_u64(2 ** 64 - 1)
    # strong pseudoprime to bases 2, 3, 5, 7
    assert not arith.is_prime_u64(3215031751)


@settings(max_examples=300, deadline=None)
@given(n=st.integers(0, 2 ** 64 - 1))
def test_is_prime_property(n):
    assert arith.is_prime_u64(n) == sympy.isprime(n)


def test_factorize_and_omega():
    assert arith.factorize(360) == {2: 3, 3: 2, 5: 1}
    assert arith.omega(30) == 3
    with pytest.raises(ValueError):
        arith.factorize(0)
