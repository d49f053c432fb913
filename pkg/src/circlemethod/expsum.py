"""Smoothed exponential sums over primes, evaluated directly.

For a scale ``x``, cutoff ``eta`` and coprimality data, the sum is
``sum_n Lambda(n) e(alpha n) 1[(n, q0) = 1] eta(n/x)``, optionally also
requiring ``n`` to avoid every prime up to a primorial bound. Only prime powers
contribute, and ``(n, q0) = 1`` depends only on the prime base, so each spec
reduces to a short list of integers and weights fed to the compiled kernel.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith, kernels
from .cutoffs import INDICATOR01, CutoffFn, evaluate
from .reports import BoundReport

DIRECT_CAP = 10 ** 9


@dataclass(frozen=True)
class SumSpec:
    """Parameters of a smoothed prime exponential sum.

    Attributes:
        x: scale; the cutoff is evaluated at ``n / x``.
        eta: the cutoff.
        q0: only ``n`` coprime to ``q0`` contribute.
        primorial: if set, only ``n`` free of primes ``<= primorial`` contribute.
    """

    x: float
    eta: CutoffFn
    q0: int = 1
    primorial: float | None = None

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be at least 1")
        if int(self.q0) < 1:
            raise ValueError("q0 must be a positive integer")

    def with_(self, **kw) -> "SumSpec":
        d = dict(x=self.x, eta=self.eta, q0=self.q0, primorial=self.primorial)
        d.update(kw)
        return SumSpec(**d)


@dataclass(frozen=True)
class ExpSumValue:
    value: complex
    terms: int


@dataclass(frozen=True)
class _Terms:
    ns: np.ndarray
    bases: np.ndarray
    lam: np.ndarray
    weights: np.ndarray


def _excluded_primes(spec: SumSpec):
    return set(arith.factorize(int(spec.q0))) if spec.q0 > 1 else set()


@lru_cache(maxsize=32)
def _terms(spec: SumSpec, cap: int = DIRECT_CAP) -> _Terms:
    lo_t, hi_t = spec.eta.support
    lo = max(1, math.ceil(lo_t * spec.x))
    hi = math.floor(hi_t * spec.x)
    if hi > cap:
        raise arith.ResourceError(f"direct sum up to {hi} exceeds the cap {cap}")
    if hi < max(lo, 2):
        empty = np.zeros(0)
        return _Terms(empty.astype(np.int64), empty.astype(np.int64), empty, empty)
    table = arith.sieve(lo, hi, max_window=max(arith.MAX_WINDOW, hi - lo + 1))
    ns, lam = table.prime_powers()
    bases = np.rint(np.exp(lam)).astype(np.int64)
    keep = np.ones(ns.size, dtype=bool)
    excl = _excluded_primes(spec)
    if excl:
        keep &= ~np.isin(bases, np.fromiter(excl, dtype=np.int64))
    if spec.primorial is not None:
        keep &= bases > spec.primorial
    ns, bases, lam = ns[keep], bases[keep], lam[keep]
    w = lam * evaluate(spec.eta, ns / spec.x)
    nz = w != 0
    out = _Terms(ns[nz], bases[nz], lam[nz], w[nz])
    for a in (out.ns, out.bases, out.lam, out.weights):
        a.setflags(write=False)
    return out


def terms(spec: SumSpec):
    """The contributing integers of a spec and their weights ``Lambda(n) eta(n/x)``."""
    t = _terms(spec)
    return t.ns, t.weights


def s_eval(spec: SumSpec, alpha: float) -> ExpSumValue:
    """The exponential sum of ``spec`` at frequency ``alpha``."""
    t = _terms(spec)
    v = kernels.expsum(t.ns, t.weights, np.array([float(alpha)]))[0]
    return ExpSumValue(complex(v), int(t.ns.size))


def s_eval_many(spec: SumSpec, alphas) -> np.ndarray:
    """The exponential sum at each frequency of an array."""
    t = _terms(spec)
    return kernels.expsum(t.ns, t.weights, np.asarray(alphas, dtype=float))


def dirichlet_kernel(H: float, alpha: float) -> complex:
    """``sum_{h=1}^{floor H} e(h alpha)`` in closed form."""
    if H < 1:
        raise ValueError("H must be at least 1")
    n = math.floor(H)
    a = float(alpha) - round(float(alpha))
    s = math.sin(math.pi * a)
    if s == 0.0:
        return complex(n, 0.0)
    ph = math.pi * (n + 1) * a
    return complex(math.cos(ph), math.sin(ph)) * (math.sin(math.pi * n * a) / s)


def dirichlet_kernel_array(H: float, alphas) -> np.ndarray:
    """Vectorised :func:`dirichlet_kernel`."""
    n = math.floor(H)
    a = np.asarray(alphas, dtype=float)
    a = a - np.round(a)
    s = np.sin(np.pi * a)
    safe = np.where(s == 0, 1.0, s)
    ratio = np.where(s == 0, float(n), np.sin(np.pi * n * a) / safe)
    return np.exp(1j * np.pi * (n + 1) * a) * ratio


def l2_exact(spec: SumSpec) -> float:
    """``int_0^1 |S(alpha)|^2 d alpha``, i.e. the sum of squared weights."""
    t = _terms(spec)
    return math.fsum((t.weights * t.weights).tolist())


def eta_smash_check(spec: SumSpec, alpha: float) -> BoundReport:
    """Compare the sum with its ``q0 = 1`` version against both perturbation bounds."""
    x = spec.x
    with_q = s_eval(spec, alpha).value
    without = s_eval(spec.with_(q0=1), alpha).value
    diff = abs(with_q - without)
    linf = spec.eta.norms.linf
    primes = arith.factorize(int(spec.q0)) if spec.q0 > 1 else {}
    bound = len(primes) * linf * math.log(x)
    small = all(p <= math.sqrt(x) for p in primes)
    sqrt_bound = 2.52 * math.sqrt(x) * linf
    return BoundReport(
        bound=bound,
        actual=diff,
        details={
            "sqrt_bound": sqrt_bound,
            "sqrt_applicable": small,
            "sqrt_margin": sqrt_bound - diff if small else math.nan,
        },
    )


def etail_check(spec: SumSpec, alpha: float) -> BoundReport:
    """Bound the sum by the total variation of the cutoff times sharp partial sums.

    The partial sums ``sum_{n <= y}`` only change at prime powers, so their
    supremum over ``y <= x`` is a maximum over prefixes of the term list.
    """
    lhs = abs(s_eval(spec, alpha).value)
    sharp = spec.with_(eta=INDICATOR01)
    t = _terms(sharp)
    sup = kernels.expsum_prefix_absmax(t.ns, t.weights, float(alpha))
    return BoundReport(
        bound=spec.eta.norms.tv1 * sup,
        actual=lhs,
        hypotheses=[("continuous cutoff", math.isfinite(spec.eta.norms.tv2))],
        details={"sup_sharp": sup},
    )


def write_csv(path, spec: SumSpec, alphas) -> None:
    """Write ``alpha, Re S, Im S, |S|`` rows for the given frequencies."""
    vals = s_eval_many(spec, alphas)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "re", "im", "abs"])
        for a, v in zip(np.asarray(alphas, dtype=float), vals):
            w.writerow([repr(float(a)), repr(v.real), repr(v.imag), repr(abs(v))])
