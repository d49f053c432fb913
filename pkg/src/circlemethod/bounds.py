"""Closed-form minor-arc bounds and their specialisations.

Everything here is arithmetic on explicit formulas. The derivation checks run at
50 significant digits because several absorbed constants leave margins in the
third decimal place. Bounds are returned as ``mpmath.mpf`` so that they remain
meaningful for scales far beyond double-precision range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .reports import BoundReport, InequalityCheck, Regime

DPS = 50
ETA0_SUP = 4 * math.log(2)


def _tol():
    return mpf(10) ** (-(mp.dps - 10))


def _ge(a, b):
    """``a >= b`` up to the working-precision rounding of exact equalities."""
    return a >= b * (1 - _tol())


@dataclass(frozen=True)
class RationalApprox:
    """``target = a/q + beta``, with ``target`` being ``4 alpha``."""

    a: int
    q: int
    beta: float
    target: float


def dirichlet_approx(alpha, Q: float) -> RationalApprox:
    """Last continued-fraction convergent of ``4 alpha`` with denominator at most Q.

    The expansion is run on the exact binary value of ``4 alpha``, so the
    convergents and the residual ``beta`` carry no rounding beyond the final
    conversion to float.
    """
    if Q < 1:
        raise ValueError("Q must be at least 1")
    theta = Fraction(alpha) * 4
    p0, q0, p1, q1 = 0, 1, 1, 0
    rest = theta
    while True:
        a_k = math.floor(rest)
        p2, q2 = a_k * p1 + p0, a_k * q1 + q0
        if q2 > Q:
            break
        p0, q0, p1, q1 = p1, q1, p2, q2
        frac = rest - a_k
        if frac == 0:
            break
        rest = 1 / frac
    return RationalApprox(p1, q1, float(theta - Fraction(p1, q1)), float(theta))


def _strong_minor_hypotheses(x, q, U, V, alt):
    checks = [
        ("q >= 4", q >= 4),
        ("1 < U < x", 1 < U < x),
        ("1 < V < x", 1 < V < x),
        ("UV <= x/4", _ge(x / 4, U * V)),
        ("UV^2 >= x", _ge(U * V * V, x)),
        ("U >= 40", U >= 40),
        ("V >= 40", V >= 40),
    ]
    if alt:
        checks.append(("UV < q - 1", U * V < q - 1))
    return checks


def bound_strong_minor(x, q, U, V, a_pm1_and_small: bool = False, check: bool = True):
    """Right-hand side of the minor-arc bound with free Vaughan parameters.

    Args:
        x, q, U, V: scale, denominator of the approximation to ``4 alpha`` and
            the two Vaughan cut points.
        a_pm1_and_small: use the alternative first term, valid when the
            numerator is ``+-1`` and ``UV < q - 1``.
        check: raise ``ValueError`` naming the first violated hypothesis.
    """
    with mp.workdps(DPS):
        x, q, U, V = mpf(x), mpf(q), mpf(U), mpf(V)
        if check:
            for name, ok in _strong_minor_hypotheses(x, q, U, V, a_pm1_and_small):
                if not ok:
                    raise ValueError(f"hypothesis violated: {name}")
        log = mpmath.log
        if a_pm1_and_small:
            first = 96 / mp.pi ** 2 * x / (x / q) ** 2 * log(4 * x) * log(4 * mp.e * q / mp.pi)
        else:
            first = (
                mpf("0.5") * x / q * log(x) * log(2 * U * V / q + 4)
                + mpf("0.89") * (U * V + mpf(5) / 2 * q) * (8 + log(q)) * log(2 * x)
            )
        second = (mpf("0.1") * x / mpmath.sqrt(q) + mpf("0.39") * x / mpmath.sqrt(x / q)) * log(
            x / (U * V)
        ) * log(V * x / U)
        third = (mpf("0.55") * x / mpmath.sqrt(U) + mpf("0.78") * x / mpmath.sqrt(V)) * log(x / U)
        return +(first + second + third)


_REGIME_RANGES = {
    Regime.SAX: "100 <= q <= x/100",
    Regime.SAX2: "100 <= q <= x^(1/3)",
    Regime.SAX3: "x^(2/3) <= q <= x/100",
    Regime.LAB: "x^(2/3) <= q <= x/100",
}


def _in_range(x, q, regime):
    if not (q >= 100 and _ge(x / 100, q)):
        return False
    if regime == Regime.SAX2:
        return _ge(mpmath.cbrt(x), q)
    if regime in (Regime.SAX3, Regime.LAB):
        return _ge(q, x ** (mpf(2) / 3))
    return True


def bound_chen_wang(x, q):
    """The earlier explicit bound for the sharply truncated sum, in the same notation."""
    with mp.workdps(DPS):
        x, q = mpf(x), mpf(q)
        if q < 1:
            raise ValueError("q must be at least 1")
        L = mpmath.log(x)
        return +(
            mpf("0.177") * x / mpmath.sqrt(q) * L ** 3
            + mpf("0.08") * x / mpmath.sqrt(x / q) * L ** mpf("3.5")
            + mpf("3.8") * x ** mpf("0.8") * L ** mpf("2.2")
        )


def bound_theorem12(x, q, regime, a: int | None = None):
    """The headline bounds with their printed constants.

    Raises ``ValueError`` when ``q`` is outside the regime's range, or for the
    ``Lab`` regime when a numerator other than ``+-1`` is supplied.
    """
    regime = Regime(regime)
    if regime == Regime.CHEN_WANG:
        return bound_chen_wang(x, q)
    if regime not in _REGIME_RANGES:
        raise ValueError(f"no headline bound for regime {regime.value}")
    with mp.workdps(DPS):
        x, q = mpf(x), mpf(q)
        if not _in_range(x, q, regime):
            raise ValueError(f"regime {regime.value} requires {_REGIME_RANGES[regime]}")
        if regime == Regime.LAB and a is not None and abs(a) != 1:
            raise ValueError("regime Lab requires a = +-1")
        log, sqrt = mpmath.log, mpmath.sqrt
        L, r = log(x), x / q
        if regime == Regime.SAX:
            out = (
                mpf("0.14") * x / sqrt(q) + mpf("0.64") * x / sqrt(r) + mpf("0.15") * x ** mpf("0.8")
            ) * L * (L + mpf("11.3"))
        elif regime == Regime.SAX2:
            L2, lq = log(2 * x), log(q)
            out = mpf("0.5") * r * L2 * (L2 + 15) + mpf("0.31") * x / sqrt(q) * lq * (lq + mpf("8.9"))
        elif regime == Regime.SAX3:
            lr = log(r)
            out = mpf("3.12") * x / r * log(2 * x) * (log(q) + 8) + mpf("1.19") * x / sqrt(r) * lr * (
                lr + mpf("2.3")
            )
        else:
            lr = log(r)
            out = mpf("9.73") * x / r ** 2 * L ** 2 + mpf("1.2") * x / sqrt(r) * lr * (lr + mpf("2.4"))
        return +out


def derivation_parameters(x, q, regime):
    """The Vaughan cut points used to specialise the minor-arc bound to ``regime``.

    Returns ``(U, V, alt)`` where ``alt`` selects the alternative first term.
    """
    regime = Regime(regime)
    with mp.workdps(DPS):
        x, q = mpf(x), mpf(q)
        if regime == Regime.SAX:
            return x ** mpf("0.4") / 4, x ** mpf("0.4") / 2, False
        if regime == Regime.SAX2:
            return x / q ** 2, q, False
        if regime == Regime.SAX3:
            return x / (x / q) ** 2, x / q, False
        if regime == Regime.LAB:
            V = mpf("1.02") * x / q
            return x / V ** 2, V, True
    raise ValueError(f"no specialisation for regime {regime.value}")


def eta_smash_correction(x):
    """Cost of moving from odd ``n`` to any modulus whose primes are at most sqrt(x)."""
    with mp.workdps(DPS):
        x = mpf(x)
        return ETA0_SUP * (mpmath.log(x) + mpf("2.52") * mpmath.sqrt(x))


def derivation_chain_check(x, q, regime) -> InequalityCheck:
    """Specialised minor-arc bound plus the modulus correction against the headline bound."""
    regime = Regime(regime)
    with mp.workdps(DPS):
        x, q = mpf(x), mpf(q)
        U, V, alt = derivation_parameters(x, q, regime)
        hyps = {"x >= 1e20": x >= mpf(10) ** 20, "q in regime range": _in_range(x, q, regime)}
        for name, ok in _strong_minor_hypotheses(x, q, U, V, alt):
            hyps[name] = bool(ok)
        lhs = bound_strong_minor(x, q, U, V, alt, check=False) + eta_smash_correction(x)
        rhs = bound_theorem12(x, q, regime) if hyps["q in regime range"] else mpf("nan")
        rel = float((rhs - lhs) / rhs) if hyps["q in regime range"] else math.nan
    return InequalityCheck(
        lhs=lhs,
        rhs=rhs,
        anchor=f"specialisation of the minor-arc bound to regime {regime.value}",
        hypotheses=hyps,
        details={"U": U, "V": V, "alternative_first_term": alt, "relative_margin": rel},
    )


def _q_range(x, regime):
    with mp.workdps(DPS):
        lo, hi = mpf(100), x / 100
        if regime == Regime.SAX2:
            hi = mpmath.cbrt(x)
        elif regime in (Regime.SAX3, Regime.LAB):
            lo = x ** (mpf(2) / 3)
        return mpmath.ceil(lo), mpmath.floor(hi)


def log_grid(lo, hi, per_decade: int = 20):
    """Log-spaced points from ``lo`` to ``hi`` inclusive, as ``mpf``."""
    with mp.workdps(DPS):
        lo, hi = mpf(lo), mpf(hi)
        span = mpmath.log10(hi) - mpmath.log10(lo)
        n = max(1, int(mpmath.ceil(span * per_decade)))
        return [lo * (hi / lo) ** (mpf(i) / n) for i in range(n + 1)]


def q_samples(x, regime, count: int = 5):
    """``count`` integer denominators spread logarithmically over the regime's q-range."""
    with mp.workdps(DPS):
        lo, hi = _q_range(mpf(x), Regime(regime))
        if hi < lo:
            return []
        pts = [lo * (hi / lo) ** (mpf(i) / (count - 1)) for i in range(count)] if count > 1 else [lo]
        out = [mpmath.floor(p) for p in pts]
        out[0], out[-1] = lo, hi
        return sorted({p for p in out if lo <= p <= hi})


def derivation_grid(x_lo=mpf(10) ** 20, x_hi=None, regimes=None, per_decade=20, q_count=3):
    """Yield ``(x, q, regime, check)`` over a log grid in x and sampled q."""
    with mp.workdps(DPS):
        x_hi = mpmath.exp(3100) if x_hi is None else mpf(x_hi)
        regimes = regimes or [Regime.SAX, Regime.SAX2, Regime.SAX3, Regime.LAB]
        for x in log_grid(x_lo, x_hi, per_decade):
            for regime in regimes:
                for q in q_samples(x, regime, q_count):
                    yield x, q, regime, derivation_chain_check(x, q, regime)


def _ineq(lhs, rhs, anchor):
    # boundary cases of the q-ranges are exact equalities, so allow rounding slack
    return InequalityCheck(lhs=lhs, rhs=rhs * (1 + _tol()), anchor=anchor, details={"printed_rhs": rhs})


def intermediate_inequalities(x, q, regime) -> list[InequalityCheck]:
    """Each auxiliary numeric inequality used when specialising to ``regime``.

    Constants are taken exactly as printed, so a failing entry pinpoints a step
    whose printed constant is too small even though the end-to-end chain holds.
    """
    regime = Regime(regime)
    out = []
    with mp.workdps(DPS):
        x, q = mpf(x), mpf(q)
        log, sqrt = mpmath.log, mpmath.sqrt
        L, L2, lq, r = log(x), log(2 * x), log(q), x / q
        P = L * (L + mpf("11.3"))
        if regime == Regime.SAX:
            out += [
                _ineq(log(8 * x ** mpf("0.2")) * L2, P / 5, "log(8x^(1/5))log(2x) <= (1/5)P"),
                _ineq((8 + lq) * L2, mpf("1.1") * P, "(8+log q)log(2x) <= 1.1P"),
                _ineq(log(2 * x ** mpf("0.6")), mpf("0.011") * P, "log(2x^(3/5)) <= 0.011P"),
                _ineq(
                    (mpf("0.55") * 2 + mpf("0.78") * sqrt(2)) * log(4 * x ** mpf("0.6")),
                    mpf("2.3") * log(2 * x ** mpf("0.6")),
                    "x^(4/5) line of the specialised bound <= 2.3 x^(4/5) log(2x^(3/5))",
                ),
                _ineq(mpf("0.4") / q, mpf("0.04") / sqrt(q), "0.4x/q <= 0.04x/sqrt(q)"),
                _ineq(mpf("2.45") * q, mpf("0.245") * sqrt(x * q), "2.45q <= 0.245x/sqrt(x/q)"),
                _ineq(
                    mpf("0.89") / 8 * mpf("1.1") + mpf("2.3") * mpf("0.011"),
                    mpf("0.149"),
                    "collected x^(4/5) coefficient <= 0.149",
                ),
                _ineq(mpf("0.89") * mpf("2.5") * mpf("1.1"), mpf("2.45"), "collected q coefficient <= 2.45"),
            ]
        elif regime == Regime.SAX2:
            out += [
                _ineq(x / sqrt(x / q ** 2), x / sqrt(q), "x/sqrt(x/q^2) <= x/sqrt(q)"),
                _ineq(x / sqrt(r), mpf("0.001") * x / sqrt(q), "x/sqrt(x/q) <= 0.001 x/sqrt(q)"),
                _ineq(q, mpf("0.001") * r, "q <= 0.001 x/q"),
                _ineq(
                    mpf("0.1") * 3 + mpf("0.39") * 3 * mpf("0.001"),
                    mpf("0.301"),
                    "collected log^2 q coefficient <= 0.301 (printed 0.001 ratio)",
                ),
                _ineq(
                    mpf("0.1") * 3 + mpf("0.39") * 3 * q / sqrt(x),
                    mpf("0.301"),
                    "collected log^2 q coefficient <= 0.301 (true ratio)",
                ),
                _ineq(mpf("0.55") * 2 + mpf("0.78") * 2, mpf("2.66"), "collected log q coefficient <= 2.66"),
                _ineq(
                    mpf("0.5") * log(2 * x / q ** 2 + 4) + mpf("0.9") * (8 + lq),
                    mpf("0.5") * (log(2 * x + 4 * q ** 2) + mpf("14.4")),
                    "0.5log(2x/q^2+4) + 0.9(8+log q) <= 0.5(log(2x+4q^2)+14.4)",
                ),
                _ineq(log(2 * x + 4 * q ** 2) + mpf("14.4"), L2 + 15, "log(2x+4q^2)+14.4 <= log(2x)+15"),
                _ineq(
                    mpf("0.301") * lq ** 2 + mpf("2.66") * lq,
                    mpf("0.301") * lq * (lq + mpf("8.9")),
                    "0.301log^2q + 2.66log q <= 0.301log q(log q+8.9)",
                ),
            ]
        elif regime == Regime.SAX3:
            lr = log(r)
            out += [
                _ineq(x / sqrt(x / r ** 2), x / sqrt(r), "x/sqrt(x/(x/q)^2) <= x/sqrt(x/q)"),
                _ineq(x / sqrt(q), mpf("0.001") * x / sqrt(r), "x/sqrt(q) <= 0.001 x/sqrt(x/q)"),
                _ineq(r, mpf("0.001") * q, "x/q <= 0.001q"),
                _ineq(
                    mpf("0.5") * r * L * log(6) + mpf("0.89") * mpf("3.5") * q * (8 + lq) * L2,
                    mpf("3.12") * q * (8 + lq) * L2,
                    "type I terms <= 3.12q(8+log q)log(2x)",
                ),
                _ineq(
                    mpf("0.39") * 3 + mpf("0.1") * 3 * mpf("0.001"),
                    mpf("1.181"),
                    "collected log^2(x/q) coefficient <= 1.181",
                ),
                _ineq(
                    mpf("1.181") * lr ** 2 + mpf("2.66") * lr,
                    mpf("1.181") * lr * (lr + mpf("2.3")),
                    "1.181log^2(x/q) + 2.66log(x/q) <= 1.181log(x/q)(log(x/q)+2.3)",
                ),
            ]
        elif regime == Regime.LAB:
            V = mpf("1.02") * r
            lv, lr = log(V), log(r)
            out += [
                _ineq(log(4 * mp.e * q / mp.pi), log(x / 4), "log(4eq/pi) <= log(x/4)"),
                _ineq(log(4 * x) * log(x / 4), L ** 2, "log(4x)log(x/4) <= log^2 x"),
                _ineq(x / sqrt(x / V ** 2), mpf("1.02") * x / sqrt(r), "x/sqrt(x/V^2) <= 1.02x/sqrt(x/q)"),
                _ineq(x / sqrt(q), mpf("0.001") * x / sqrt(r), "x/sqrt(q) <= 0.001 x/sqrt(x/q)"),
                _ineq(
                    mpf("0.39") * 3 + mpf("0.1") * 3 * mpf("0.001"),
                    mpf("1.19"),
                    "collected log^2(1.02x/q) coefficient <= 1.19",
                ),
                _ineq(
                    mpf("0.55") * 2 * mpf("1.02") + mpf("0.78") * 2 / sqrt(mpf("1.02")),
                    mpf("2.67"),
                    "collected log(1.02x/q) coefficient <= 2.67",
                ),
                _ineq(
                    mpf("1.19") * lv ** 2 + mpf("2.67") * lv,
                    mpf("1.19") * lv * (lv + mpf("2.3")),
                    "last two terms <= 1.19log(1.02x/q)(log(1.02x/q)+2.3)",
                ),
                _ineq(mpf("1.19") * lv, mpf("1.2") * lr, "1.19log(1.02x/q) <= 1.2log(x/q)"),
                _ineq(lv + mpf("2.3"), lr + mpf("2.35"), "log(1.02x/q)+2.3 <= log(x/q)+2.35"),
                _ineq(96 / mp.pi ** 2, mpf("9.73"), "96/pi^2 <= 9.73"),
                _ineq(mpf(1), q - 1 - q / mpf("1.02"), "UV < q-1 for the 1.02 choice"),
            ]
        else:
            raise ValueError(f"no specialisation for regime {regime.value}")
    return out


def default_cut(x: float) -> float:
    """Common value for U and V at desk scale; satisfies every hypothesis once x >= 6400."""
    return max(40.0, x ** 0.4 / 2, x ** (1 / 3) * (1 + 1e-9))


def verify_bound_at_desk(
    x: float,
    alpha: float,
    q0: int = 2,
    U: float | None = None,
    V: float | None = None,
    approx: RationalApprox | None = None,
    Q: float | None = None,
) -> BoundReport:
    """Compare the minor-arc bound with the directly computed sum.

    Args:
        x: scale, at most the direct-summation cap.
        alpha: frequency.
        q0: coprimality modulus of the sum; values other than 2 add the
            corresponding modulus correction to the bound.
        U, V: Vaughan cut points (default :func:`default_cut`).
        approx: rational approximation of ``4 alpha``; computed by
            :func:`dirichlet_approx` with denominator bound ``Q`` (default
            ``sqrt(x)``) when omitted.
    """
    from . import arith
    from .cutoffs import ETA0
    from .expsum import SumSpec, s_eval

    U = default_cut(x) if U is None else U
    V = default_cut(x) if V is None else V
    if approx is None:
        approx = dirichlet_approx(alpha, Q if Q is not None else max(1.0, math.sqrt(x)))
    q = approx.q
    with mp.workdps(DPS):
        hyps = [(n, bool(ok)) for n, ok in _strong_minor_hypotheses(mpf(x), mpf(q), mpf(U), mpf(V), False)]
    hyps.append(("|beta| <= 1/q^2", abs(approx.beta) <= 1 / q ** 2))
    hyps.append(("gcd(a, q) = 1", math.gcd(approx.a, q) == 1))
    actual = abs(s_eval(SumSpec(x, ETA0, q0=q0), alpha).value)
    bound = float(bound_strong_minor(x, q, U, V, check=False))
    if q0 != 2:
        bound += ETA0_SUP * math.log(x) * (len(arith.factorize(q0)) if q0 > 1 else 0) + ETA0_SUP * math.log(x)
    return BoundReport(
        bound=bound,
        actual=actual,
        regime=Regime.STRONG_MINOR,
        hypotheses=hyps,
        details={"a": approx.a, "q": q, "beta": approx.beta, "U": U, "V": V, "q0": q0},
    )
