"""Numerical checks of the linear, bilinear and mean-square estimates.

Each check evaluates both sides of one inequality on concrete data and returns
an :class:`InequalityCheck`. Mean values of ``|S|^2`` over arcs are computed
exactly from the autocorrelation of the coefficient sequence: for a trigonometric
polynomial ``S(alpha) = sum_n w_n e(n alpha)``,

    int_{c-r}^{c+r} |S|^2 = sum_k R(k) e(kc) sin(2 pi k r) / (pi k),

with ``R(k) = sum_n w_n w_{n+k}`` and the ``k = 0`` term read as ``2 r R(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import _fallback, arith, kernels
from .cutoffs import CutoffFn
from .expsum import SumSpec, _terms, s_eval
from .reports import InequalityCheck

EULER_GAMMA = 0.5772156649015329


def _inv(v: float) -> float:
    """``1/v`` with the convention that dividing by zero gives infinity."""
    return math.inf if v == 0 else 1.0 / v


def circle_dist(t) -> np.ndarray:
    """Distance to the nearest integer."""
    t = np.asarray(t, dtype=float)
    return np.abs(t - np.round(t))


@dataclass(frozen=True)
class ScaledCutoff:
    """``F(y) = weight * eta(y / X)``, with derivative norms taken as total variations."""

    eta: CutoffFn
    X: float
    weight: float = 1.0

    def __call__(self, y):
        return self.weight * self.eta(np.asarray(y, dtype=float) / self.X)

    def integers(self) -> np.ndarray:
        lo, hi = self.eta.support
        return np.arange(math.ceil(lo * self.X), math.floor(hi * self.X) + 1, dtype=np.int64)

    @property
    def l1(self) -> float:
        return abs(self.weight) * self.X * self.eta.norms.l1

    def deriv_norm(self, k: int) -> float:
        """``||F^(k)||_1``, read as a total variation for ``k >= 1``."""
        n = self.eta.norms
        if k == 0:
            return self.l1
        if k == 1:
            return abs(self.weight) * n.tv1
        if k == 2:
            return abs(self.weight) * n.tv2 / self.X
        raise ValueError("only k <= 2 is supported")


def _linear_sum(F: ScaledCutoff, alpha: float, odd: bool = False) -> complex:
    ns = F.integers()
    if odd:
        ns = ns[ns % 2 == 1]
    w = F(ns)
    return complex(kernels.expsum(ns, w, np.array([float(alpha)]))[0])


def poisson_bounds_check(F: ScaledCutoff, alpha: float, k: int) -> InequalityCheck:
    """Summation-by-parts bounds for ``sum_n F(n) e(alpha n)``.

    ``k = 0`` compares the plain sum with the integral when ``alpha`` is an
    integer and bounds the absolute sum otherwise; ``k >= 1`` uses the
    ``|2 sin(pi alpha)|^-k`` bound.
    """
    total = _linear_sum(F, alpha)
    integral_alpha = abs(alpha - round(alpha)) == 0
    if k == 0 and integral_alpha:
        return InequalityCheck(
            lhs=abs(total.real - F.l1),
            rhs=0.5 * F.deriv_norm(1),
            anchor="sum versus integral of a smooth function",
            details={"sum": total.real, "integral": F.l1},
        )
    if k == 0:
        return InequalityCheck(
            lhs=abs(total),
            rhs=F.l1 + 0.5 * F.deriv_norm(1),
            anchor="trivial bound for a smooth exponential sum",
        )
    # sine of the distance to the nearest integer, so integral alpha gives exactly 0
    s = 2 * math.sin(math.pi * float(circle_dist(alpha)))
    rhs = F.deriv_norm(k) * _inv(s ** k)
    return InequalityCheck(lhs=abs(total), rhs=rhs, anchor=f"summation by parts, order {k}")


def odd_restricted_check(F: ScaledCutoff, alpha: float, k: int) -> InequalityCheck:
    """As :func:`poisson_bounds_check`, summing over odd integers only."""
    total = abs(_linear_sum(F, alpha, odd=True))
    if k == 0:
        rhs = 0.5 * F.l1 + 0.5 * F.deriv_norm(1)
        return InequalityCheck(lhs=total, rhs=rhs, anchor="trivial bound over odd integers")
    s = math.sin(math.pi * float(circle_dist(2 * alpha)))
    rhs = F.deriv_norm(k) * _inv(2 * s ** k)
    return InequalityCheck(lhs=total, rhs=rhs, anchor=f"summation by parts over odd integers, order {k}")


def vinogradov_sum(alpha, approx, x, y, A, B, theta=0.0, odd_only=False) -> InequalityCheck:
    """Sum of ``min(A, B / |sin(pi alpha n + theta)|)`` over ``x < n <= y``.

    Args:
        alpha: the frequency.
        approx: ``(a, q, beta)`` approximating ``alpha`` (``2 alpha`` when
            ``odd_only``) modulo 1.
        x, y: the summation range ``x < n <= y``.
        A, B: positive constants.
        theta: phase shift inside the sine.
        odd_only: restrict to odd n.
    """
    a, q, beta = approx
    target = 2 * alpha if odd_only else alpha
    hyps = {
        "q >= 1": q >= 1,
        "|beta| <= 1/q^2": abs(beta) <= 1.0 / q ** 2,
        "approximation consistent": float(circle_dist(target - a / q - beta)) <= 1e-12,
        "x < y": x < y,
    }
    ns = np.arange(math.floor(x) + 1, math.floor(y) + 1, dtype=np.int64)
    if odd_only:
        ns = ns[ns % 2 == 1]
    # reduce alpha n modulo 2 before multiplying by pi
    ph = np.mod(alpha * ns.astype(float), 2.0)
    s = np.abs(np.sin(np.pi * ph + theta))
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.minimum(A, np.where(s == 0, np.inf, B / s))
    span = 2 * q if odd_only else q
    rhs = (math.floor((y - x) / span) + 1) * (2 * A + (2 / math.pi) * B * q * math.log(4 * q))
    return InequalityCheck(
        lhs=float(terms.sum()),
        rhs=rhs,
        anchor="Vinogradov-type sum" + (" over odd integers" if odd_only else ""),
        hypotheses=hyps,
    )


def _separation(points) -> float:
    p = np.sort(np.mod(np.asarray(points, dtype=float), 1.0))
    if p.size < 2:
        return math.inf
    gaps = np.diff(np.append(p, p[0] + 1.0))
    return float(gaps.min())


def large_sieve_check(points, I, a, delta=None) -> InequalityCheck:
    """The large sieve inequality for points ``xi_i`` and coefficients on ``I``.

    Args:
        points: the frequencies ``xi_i``.
        I: ``(N1, N2)``; ``a[j]`` is the coefficient of ``ceil(N1) + j``.
        a: complex coefficients, one per integer of ``I``.
        delta: claimed separation; defaults to the actual minimal separation.
    """
    n1, n2 = I
    ns = np.arange(math.ceil(n1), math.floor(n2) + 1)
    a = np.asarray(a, dtype=complex)
    if a.size != ns.size:
        raise ValueError("need one coefficient per integer of I")
    sep = _separation(points)
    delta = sep if delta is None else delta
    hyps = {"|I| >= 1": n2 - n1 >= 1, "separation >= delta": sep >= delta and delta > 0}
    pts = np.asarray(points, dtype=float)
    ph = np.exp(2j * np.pi * np.mod(np.outer(pts, ns), 1.0))
    lhs = float(np.sum(np.abs(ph @ a) ** 2))
    rhs = ((n2 - n1) + _inv(delta)) * float(np.sum(np.abs(a) ** 2))
    return InequalityCheck(lhs=lhs, rhs=rhs, anchor="large sieve inequality", hypotheses=hyps)


def _min_dist_multiples(alpha: float, step: int, jmax: float) -> float:
    j = np.arange(1, math.floor(jmax) + 1)
    if j.size == 0:
        return math.inf
    return float(circle_dist(step * j * alpha).min())


def bilinear_checks(variant, I, J, alpha, M, a, b) -> InequalityCheck:
    """Bilinear large-sieve bounds for ``sum a_n b_m e(nm alpha)``.

    Args:
        variant: "special", "odd" or "subdivided".
        I, J: intervals ``(lo, hi)``; ``a`` and ``b`` list coefficients of
            their integer points in increasing order.
        alpha: the frequency.
        M: subdivision parameter (used by "subdivided").
        a, b: coefficient sequences.
    """
    ns = np.arange(math.ceil(I[0]), math.floor(I[1]) + 1)
    ms = np.arange(math.ceil(J[0]), math.floor(J[1]) + 1)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != ns.size or b.size != ms.size:
        raise ValueError("coefficient lengths must match the integer points of I and J")
    len_i = I[1] - I[0]
    len_j = J[1] - J[0]
    norm = math.sqrt(float(np.sum(np.abs(a) ** 2)) * float(np.sum(np.abs(b) ** 2)))
    aa, bb = a.copy(), b.copy()
    if variant != "special":
        aa[ns % 2 == 0] = 0
        bb[ms % 2 == 0] = 0
    ph = np.exp(2j * np.pi * np.mod(np.outer(ns, ms) * alpha, 1.0))
    lhs = abs(aa @ ph @ bb)
    if variant == "special":
        hyps = {"|I| >= 1": len_i >= 1, "|J| >= 1": len_j >= 1}
        rhs = math.sqrt(len_i + _inv(_min_dist_multiples(alpha, 1, len_j))) * norm
    elif variant == "odd":
        hyps = {"|I| >= 2": len_i >= 2, "|J| >= 2": len_j >= 2}
        rhs = math.sqrt(0.5 * len_i + _inv(_min_dist_multiples(alpha, 4, len_j / 2))) * norm
    elif variant == "subdivided":
        hyps = {"|I| >= 2": len_i >= 2, "|J| >= 2": len_j >= 2, "M >= 1": M >= 1}
        pieces = math.floor(len_j / (2 * M)) + 1
        rhs = math.sqrt((0.5 * len_i + _inv(_min_dist_multiples(alpha, 4, M))) * pieces) * norm
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return InequalityCheck(lhs=lhs, rhs=rhs, anchor=f"bilinear large sieve ({variant})", hypotheses=hyps)


def _excluded(spec: SumSpec, p: int) -> bool:
    return (spec.q0 % p == 0) or (spec.primorial is not None and p <= spec.primorial)


def montgomery_uncertainty_check(spec: SumSpec, alpha: float, q0_div: int) -> InequalityCheck:
    """Montgomery's uncertainty principle at modulus ``q0_div``."""
    fac = arith.factorize(q0_div) if q0_div > 1 else {}
    hyps = {"q0_div divides the coprimality modulus": all(_excluded(spec, p) for p in fac)}
    squarefree = all(e == 1 for e in fac.values())
    # one phase vector for alpha; the shifts by r/q0_div use exact integer residues
    t = _terms(spec)
    v = t.weights * np.exp(2j * np.pi * _fallback._phases(t.ns, float(alpha)))
    lhs = 0.0
    for r in range(q0_div):
        if math.gcd(r, q0_div) == 1:
            lhs += abs(np.dot(v, np.exp(2j * np.pi * ((r * t.ns) % q0_div) / q0_div))) ** 2
    base = abs(v.sum()) ** 2
    rhs = (1.0 / arith.euler_phi(q0_div)) * base if squarefree else 0.0
    # the principle is a lower bound, so report it as rhs <= lhs; for q0_div = 2
    # it is an equality, so allow for the rounding of two separate evaluations
    return InequalityCheck(
        lhs=rhs * (1 - 1e-12),
        rhs=lhs,
        anchor="Montgomery uncertainty principle",
        hypotheses=hyps,
        details={"lower_bound": rhs},
    )


def G(R: float) -> Fraction:
    """``sum_{q <= R} mu(q)^2 / phi(q)`` as an exact fraction."""
    total = Fraction(0)
    for q in range(1, math.floor(R) + 1):
        fac = arith.factorize(q)
        if all(e == 1 for e in fac.values()):
            total += Fraction(1, arith.euler_phi(q))
    return total


def _dense(spec: SumSpec):
    t = _terms(spec)
    if t.ns.size == 0:
        return 0, np.zeros(1)
    lo = int(t.ns[0])
    w = np.zeros(int(t.ns[-1]) - lo + 1)
    w[t.ns - lo] = t.weights
    return lo, w


@lru_cache(maxsize=8)
def autocorrelation(spec: SumSpec) -> np.ndarray:
    """``R(k) = sum_n w_n w_{n+k}`` for ``k >= 0`` (FFT, zero-padded)."""
    _, w = _dense(spec)
    size = 1 << int(math.ceil(math.log2(2 * w.size)))
    f = np.fft.rfft(w, size)
    r = np.fft.irfft(f * np.conj(f), size)[: w.size]
    r.setflags(write=False)
    return r


def arc_l2(spec: SumSpec, centers, radius: float) -> float:
    """``sum_c int_{|alpha - c| <= radius} |S(alpha)|^2`` for rational centers.

    Args:
        spec: the sum.
        centers: iterable of ``(a0, q0)`` pairs, the center being ``a0/q0``.
        radius: arc half-width, at most 1/2.
    """
    r = autocorrelation(spec)
    k = np.arange(1, r.size)
    kern = np.sin(2 * np.pi * np.mod(k * radius, 1.0)) / (np.pi * k)
    total = 0.0
    for a0, q0 in centers:
        ph = np.cos(2 * np.pi * np.mod(k * a0, q0) / q0)
        total += 2 * radius * r[0] + 2 * float(np.dot(r[1:] * ph, kern))
    return total


def s_eta_sq(spec: SumSpec) -> float:
    """``S_{eta^2}(x, 0)``: the sum of ``Lambda(n) eta(n/x)^2``."""
    t = _terms(spec)
    return math.fsum((t.weights * t.weights / t.lam).tolist())


def _primorial_divides(spec: SumSpec, R: float) -> bool:
    return all(_excluded(spec, int(p)) for p in arith.primes_up_to(R))


def local_l2_bound(spec: SumSpec, Q: float, R: float) -> InequalityCheck:
    """Mean square over arcs around fractions of height at most ``Q``."""
    radius = 1.0 / (2 * Q * Q * R * R)
    centers = [(a, q) for q in range(1, math.floor(Q) + 1) for a in range(q) if math.gcd(a, q) == 1]
    lhs = arc_l2(spec, centers, radius)
    prod = math.prod(p / (p - 1) for p in arith.primes_up_to(Q).tolist())
    x = spec.x
    sq = s_eta_sq(spec)
    rhs = prod * math.log(x) * _inv(math.log(R)) * sq
    return InequalityCheck(
        lhs=lhs,
        rhs=rhs,
        anchor="local mean square over major arcs",
        hypotheses={"primes up to R excluded": _primorial_divides(spec, R), "Q, R >= 1": Q >= 1 and R >= 1},
        details={"rhs_with_G": prod * math.log(x) / float(G(R)) * sq, "arcs": len(centers)},
    )


def uplow_bound(spec: SumSpec, r: float) -> InequalityCheck:
    """Upper bound for the mean square over ``||alpha|| <= r``."""
    x = spec.x
    lhs = arc_l2(spec, [(0, 1)], r)
    denom = 1 - math.log(2 * r * x) / math.log(x)
    rhs = 2 / denom * s_eta_sq(spec) if denom > 0 else math.inf
    return InequalityCheck(
        lhs=lhs,
        rhs=rhs,
        anchor="mean square near zero, upper bound",
        hypotheses={
            "0 < r < 1/2": 0 < r < 0.5,
            "primes up to sqrt(1/2r) excluded": _primorial_divides(spec, math.sqrt(1 / (2 * r))),
        },
    )


def l2_lower_bound(spec: SumSpec, r: float) -> InequalityCheck:
    """Lower bound for the mean square over ``||alpha|| <= r``."""
    x = spec.x
    n = spec.eta.norms
    lhs = arc_l2(spec, [(0, 1)], r) if r > 0 else 0.0
    s0 = s_eval(spec, 0.0).value.real
    tail = n.l1_second_combo * s0 / (math.pi ** 2 * r * x) if r > 0 else math.inf
    num = max(s_eta_sq(spec) - tail, 0.0)
    rhs = num * num / (n.l2 ** 2 * x + n.l1_self_deriv)
    # lower bound: the claim is rhs <= lhs
    return InequalityCheck(
        lhs=rhs,
        rhs=lhs,
        anchor="mean square near zero, lower bound",
        hypotheses={"0 <= r <= 1/2": 0 <= r <= 0.5, "continuous cutoff": math.isfinite(n.tv2)},
    )


def downlow2_hypotheses(x, eta: CutoffFn, r, dps: int = 50) -> dict:
    """The side conditions of the cleaned-up lower bound, evaluated exactly.

    The cutoff is normalised to unit L2 norm first.
    """
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        r = mpmath.mpf(r)
        n = eta.norms
        l2 = mpmath.sqrt(mpmath.mpf(n.l2) ** 2)
        selfd = mpmath.mpf(n.l1_self_deriv) / l2 ** 2
        combo = mpmath.mpf(n.l1_second_combo) / l2 ** 2
        linf = mpmath.mpf(n.linf) / l2
        c = mpmath.mpf(eta.support[0])
        return {
            "1/(2x) <= r <= 1/2": bool(1 / (2 * x) <= r <= mpmath.mpf(1) / 2),
            "cx >= 1e8": bool(c * x >= mpmath.mpf(10) ** 8),
            "x >= 1e4 |eta eta'|": bool(x >= 10 ** 4 * selfd),
            "log(cx) >= 5 |eta eta'|": bool(mpmath.log(c * x) >= 5 * selfd),
            "x >= 1e8 |eta|_inf^4": bool(x >= mpmath.mpf(10) ** 8 * linf ** 4),
            "rx >= 20 |eta'eta' + eta eta''| |eta|_inf": bool(r * x >= 20 * combo * linf),
        }


def meso_eps(x: float, H: float) -> float:
    """The relative error term of the mesoscopic bound."""
    ll = math.log(math.log(2 * H))
    return 0.13 * math.log(x) / H + (math.exp(EULER_GAMMA) * ll + 2.507 / ll) * math.log(9 * H) / (2 * H)


def meso_lhs(spec: SumSpec, H: float) -> float:
    """``int |S|^2 |D_H|^2`` as the shifted double sum over ``|k| < H``."""
    Hn = math.floor(H)
    _, w = _dense(spec)
    total = (Hn) * float(np.dot(w, w))
    for k in range(1, min(Hn, w.size)):
        total += 2 * (Hn - k) * float(np.dot(w[:-k], w[k:]))
    return total


def meso_lhs_quadrature(spec: SumSpec, H: float, nodes: int | None = None) -> float:
    """``int |S|^2 |D_H|^2`` by an equispaced rule, exact once nodes exceed the degree.

    Both trigonometric polynomials are evaluated at the nodes by FFT.
    """
    Hn = math.floor(H)
    lo, w = _dense(spec)
    m = nodes or 1 << math.ceil(math.log2(2 * (lo + w.size + Hn) + 1))
    a = np.zeros(m)
    np.add.at(a, (lo + np.arange(w.size)) % m, w)
    d = np.zeros(m)
    d[np.arange(1, Hn + 1) % m] += 1.0
    s_vals = np.fft.ifft(a) * m
    d_vals = np.fft.ifft(d) * m
    return float(np.mean(np.abs(s_vals) ** 2 * np.abs(d_vals) ** 2))


def meso_bound(spec: SumSpec, H: float) -> InequalityCheck:
    """The mesoscopic mean-square bound weighted by a Dirichlet kernel."""
    x = spec.x
    eps = meso_eps(x, H)
    lhs = meso_lhs(spec, H)
    rhs = (1 + eps) * 8 * math.floor(H) ** 2 * x * spec.eta.norms.linf ** 2
    return InequalityCheck(
        lhs=lhs,
        rhs=rhs,
        anchor="mesoscopic mean square",
        hypotheses={"H >= 100": H >= 100, "primes up to sqrt(x) excluded": _primorial_divides(spec, math.sqrt(x))},
        details={"eps": eps},
    )


@lru_cache(maxsize=4)
def twin_prime_constant(P: int = 10 ** 7):
    """Partial Euler product for the twin prime constant and an enclosing interval.

    Returns:
        ``(value, lower, upper)`` where ``value`` is the product over ``2 < p <= P``
        and the true constant lies in ``[lower, upper]``.
    """
    ps = arith.primes_in(3, P).astype(np.float64)
    logs = np.log1p(-1.0 / (ps - 1) ** 2)
    value = 2 * math.exp(math.fsum(logs.tolist()))
    # the remaining factors lie in [1 - sum_{n >= P} n^-2, 1]
    return value, value * (1 - 1.0 / (P - 1)), value


def siebert_empirical(x: float, h: int) -> InequalityCheck:
    """Count prime pairs ``(p, p + h)`` up to ``x`` against the upper-bound sieve."""
    x = int(x)
    if x > 10 ** 8:
        raise arith.ResourceError("prime pair counts are limited to x <= 1e8")
    flags = kernels.sieve_flags(0, x + 1, arith.primes_up_to(math.isqrt(x)))
    if h >= 0:
        count = int(np.count_nonzero(flags[: x + 1 - h] & flags[h:]))
    else:
        count = int(np.count_nonzero(flags[-h:] & flags[: x + 1 + h]))
    s2 = twin_prime_constant(10 ** 6)[0]
    factor = math.prod((p - 1) / (p - 2) for p in arith.factorize(abs(h)) if p > 2) if h else math.inf
    rhs = 8 * s2 * x / math.log(x) ** 2 * factor
    return InequalityCheck(
        lhs=count,
        rhs=rhs,
        anchor="upper-bound sieve for prime pairs",
        hypotheses={"h even and nonzero": h != 0 and h % 2 == 0},
    )
