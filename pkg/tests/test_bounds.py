import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from circlemethod import bounds
from circlemethod.bounds import (
    bound_chen_wang,
    bound_strong_minor,
    bound_theorem12,
    derivation_chain_check,
    derivation_parameters,
    dirichlet_approx,
    eta_smash_correction,
    intermediate_inequalities,
    verify_bound_at_desk,
)
from circlemethod.reports import Regime

REGIMES = [Regime.SAX, Regime.SAX2, Regime.SAX3, Regime.LAB]


def retyped_strong_minor(x, q, U, V):
    """Plain-float transcription of the minor-arc bound, kept separate from the library's."""
    L = math.log
    t1 = 0.5 * x / q * L(x) * L(2 * U * V / q + 4) + 0.89 * (U * V + 2.5 * q) * (8 + L(q)) * L(2 * x)
    t2 = (0.1 * x / q ** 0.5 + 0.39 * x / (x / q) ** 0.5) * L(x / (U * V)) * L(V * x / U)
    t3 = (0.55 * x / U ** 0.5 + 0.78 * x / V ** 0.5) * L(x / U)
    return t1 + t2 + t3


def test_dirichlet_examples():
    r = dirichlet_approx(0.25, 10)
    assert (r.a, r.q, r.beta) == (1, 1, 0.0)
    r = dirichlet_approx(0.3, 100)
    assert (r.a, r.q) == (6, 5) and abs(r.beta) < 1e-15
    r = dirichlet_approx(math.pi / 4, 50)
    assert (r.a, r.q) == (22, 7)
    assert abs(r.beta) == pytest.approx(abs(math.pi - 22 / 7), rel=1e-12)
    assert abs(r.beta) <= 1 / 49
    with pytest.raises(ValueError):
        dirichlet_approx(0.1, 0.5)


@given(st.floats(0, 1, exclude_max=True), st.integers(1, 10 ** 6))
@settings(max_examples=300, deadline=None)
def test_dirichlet_property(alpha, Q):
    r = dirichlet_approx(alpha, Q)
    assert 1 <= r.q <= Q
    assert math.gcd(r.a, r.q) == 1
    exact = Fraction(alpha) * 4 - Fraction(r.a, r.q)
    assert abs(exact) <= Fraction(1, r.q) / Q
    assert float(exact) == r.beta


def test_dirichlet_ten_thousand_draws():
    rng = np.random.default_rng(2024)
    for alpha, Q in zip(rng.random(10 ** 4), rng.integers(1, 10 ** 8, 10 ** 4)):
        r = dirichlet_approx(float(alpha), int(Q))
        assert math.gcd(r.a, r.q) == 1
        exact = Fraction(float(alpha)) * 4 - Fraction(r.a, r.q)
        assert abs(exact) * r.q * int(Q) <= 1


def test_first_term_coefficient_audit():
    with mp.workdps(50):
        coef = mpf("0.5") * (2 / mp.pi) * 4 * mpmath.log(2)
        assert coef <= mpf("0.89")
        assert 96 / mp.pi ** 2 <= mpf("9.73")


def test_strong_minor_matches_retyped_formula():
    # UV^2 < x here, so the hypotheses are switched off for this arithmetic comparison
    got = float(bound_strong_minor(1e6, 101, 40, 40, check=False))
    assert got == pytest.approx(retyped_strong_minor(1e6, 101, 40, 40), rel=1e-12)
    got = float(bound_strong_minor(1e7, 1009, 60, 500))
    assert got == pytest.approx(retyped_strong_minor(1e7, 1009, 60, 500), rel=1e-12)


def test_strong_minor_alternative_term():
    x, q, U, V = 1e12, 10 ** 9, 40, 2e5
    got = bound_strong_minor(x, q, U, V, a_pm1_and_small=True)
    base = bound_strong_minor(x, q, U, V)
    L = math.log
    first_alt = 96 / math.pi ** 2 * x / (x / q) ** 2 * L(4 * x) * L(4 * math.e * q / math.pi)
    first = 0.5 * x / q * L(x) * L(2 * U * V / q + 4) + 0.89 * (U * V + 2.5 * q) * (8 + L(q)) * L(2 * x)
    assert float(got - base) == pytest.approx(first_alt - first, rel=1e-9)


@pytest.mark.parametrize(
    "args,name",
    [
        ((1e6, 3, 100, 100), "q >= 4"),
        ((1e6, 101, 30, 200), "U >= 40"),
        ((1e6, 101, 600, 600), "UV <= x/4"),
        ((1e6, 101, 40, 40), "UV^2 >= x"),
    ],
)
def test_strong_minor_names_violated_hypothesis(args, name):
    with pytest.raises(ValueError, match=name.replace("^", r"\^")):
        bound_strong_minor(*args)
    with pytest.raises(ValueError, match="UV < q - 1"):
        bound_strong_minor(1e8, 1000, 40, 2000, a_pm1_and_small=True)


def test_theorem12_examples():
    sax = bound_theorem12(1e20, 1e4, Regime.SAX)
    # at q = 1e4 < log^4 x the bound exceeds the trivial one; it drops below x once q >> log^4 x
    assert sax > mpf(10) ** 20
    assert bound_theorem12(1e20, 1e10, Regime.SAX) < mpf(10) ** 20
    assert bound_theorem12(1e20, 1e4, Regime.SAX2) < sax
    q = mpf(10) ** 17
    assert bound_theorem12(1e20, q, Regime.LAB, a=1) < bound_theorem12(1e20, q, Regime.SAX3)


def test_theorem12_sax_formula():
    x, q = 1e25, 1e7
    L = math.log(x)
    want = (0.14 * x / q ** 0.5 + 0.64 * x / (x / q) ** 0.5 + 0.15 * x ** 0.8) * L * (L + 11.3)
    assert float(bound_theorem12(x, q, "Sax")) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize(
    "x,q,regime",
    [(1e20, 50, "Sax"), (1e20, 1e10, "Sax2"), (1e20, 1e10, "Sax3"), (1e20, 1e19, "Lab")],
)
def test_theorem12_range_errors(x, q, regime):
    with pytest.raises(ValueError):
        bound_theorem12(x, q, regime)


def test_theorem12_lab_numerator():
    with pytest.raises(ValueError, match="a = "):
        bound_theorem12(1e20, 1e17, Regime.LAB, a=3)
    with pytest.raises(ValueError):
        bound_theorem12(1e20, 1e17, Regime.STRONG_MINOR)


def test_chen_wang_comparison():
    ratio = bound_theorem12(1e30, 1e5, Regime.SAX) / bound_chen_wang(1e30, 1e5)
    assert 0.01 <= ratio <= 0.1
    assert mpmath.isfinite(bound_chen_wang(1e30, 1))
    assert bound_theorem12(1e30, 1e5, Regime.CHEN_WANG) == bound_chen_wang(1e30, 1e5)
    with pytest.raises(ValueError):
        bound_chen_wang(1e30, 0.5)


def test_chen_wang_first_term_decreasing():
    qs = np.logspace(2, 10, 30)
    first = [0.177 * 1e30 / math.sqrt(q) * math.log(1e30) ** 3 for q in qs]
    assert all(a > b for a, b in zip(first, first[1:]))


@pytest.mark.parametrize("regime", REGIMES)
def test_bounds_increase_with_x_at_fixed_ratio(regime):
    xs = bounds.log_grid(mpf(10) ** 21, mpf(10) ** 60, 2)
    for frac in (mpf(1) / 3, mpf(5) / 6):
        vals = []
        for x in xs:
            lo, hi = bounds._q_range(x, regime)
            if hi < lo:
                continue
            q = mpmath.floor(lo * (hi / lo) ** frac)
            vals.append(bound_theorem12(x, q, regime))
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_derivation_parameters():
    U, V, alt = derivation_parameters(mpf(10) ** 30, 10 ** 8, Regime.SAX2)
    assert float(U) == pytest.approx(1e14, rel=1e-14) and V == 10 ** 8 and not alt
    U, V, alt = derivation_parameters(mpf(10) ** 30, mpf(10) ** 25, Regime.LAB)
    assert alt and float(V) == pytest.approx(1.02e5, rel=1e-15)
    assert U * V < mpf(10) ** 25 - 1


def test_eta_smash_correction_value():
    x = 1e30
    want = 4 * math.log(2) * (math.log(x) + 2.52 * math.sqrt(x))
    assert float(eta_smash_correction(x)) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("regime", REGIMES)
def test_chain_on_a_sample_grid(regime):
    for x, q, reg, check in bounds.derivation_grid(
        mpf(10) ** 20, mpmath.exp(3100), regimes=[regime], per_decade=mpf(1) / 40, q_count=4
    ):
        assert check.hypotheses_ok, (x, q, check.hypotheses)
        assert check.passed, (x, q, reg, check.details)


def test_chain_at_the_high_end_of_lab():
    x = mpf(10) ** 40
    q = mpmath.floor(x / (mpf("3.29e9") / mp.pi))
    check = derivation_chain_check(x, q, Regime.LAB)
    assert check.passed


def test_lab_gate_holds_from_two_thirds():
    for x in bounds.log_grid(mpf(10) ** 20, mpf(10) ** 300, 1):
        for q in bounds.q_samples(x, Regime.LAB, 4):
            U, V, alt = derivation_parameters(x, q, Regime.LAB)
            assert U * V < q - 1


@pytest.mark.parametrize("regime", REGIMES)
def test_intermediate_inequalities(regime):
    for x in bounds.log_grid(mpf(10) ** 20, mpmath.exp(3100), mpf(1) / 30):
        for q in bounds.q_samples(x, regime, 3):
            for check in intermediate_inequalities(x, q, regime):
                if "printed 0.001 ratio" in check.anchor:
                    continue
                assert check.passed, (float(mpmath.log10(x)), check.anchor)


def test_printed_ratio_step_overshoots():
    # with the printed 0.001 ratio the collected coefficient is 0.30117, just above 0.301;
    # the true ratio q/sqrt(x) is far smaller and the step holds
    checks = intermediate_inequalities(mpf(10) ** 30, 10 ** 6, Regime.SAX2)
    by_name = {c.anchor: c for c in checks}
    printed = by_name["collected log^2 q coefficient <= 0.301 (printed 0.001 ratio)"]
    assert float(printed.lhs) == pytest.approx(0.30117)
    assert not printed.passed
    assert by_name["collected log^2 q coefficient <= 0.301 (true ratio)"].passed


def test_desk_example():
    r = verify_bound_at_desk(1e5, 1 / 40 + 1e-7)
    assert r.hypotheses_ok
    assert r.details["q"] == 10
    assert r.passed and r.margin > 0


def test_desk_random_frequencies():
    rng = np.random.default_rng(8)
    judged = 0
    while judged < 20:
        r = verify_bound_at_desk(1e6, float(rng.random()))
        if 40 <= r.details["q"] <= 1000:
            assert r.passed, r.details
            judged += 1


def test_desk_out_of_regime_is_flagged():
    r = verify_bound_at_desk(1e6, 0.25 + 1e-9)
    assert r.details["q"] == 1
    assert not r.hypotheses_ok
    assert r.passed is None
