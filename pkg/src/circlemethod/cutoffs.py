"""Piecewise closed-form cutoff functions.

A cutoff is a list of contiguous pieces, each affine in ``t`` or affine in
``log t``. Everything the analysis needs (norms, total variations of the
function and of its derivative, Fourier and Mellin transforms) is computed
piece by piece from exact antiderivatives. Derivatives of cutoffs with corners
or jumps are treated as measures, so "norm of the derivative" always means the
total variation of the function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import integrate

LOG2 = math.log(2.0)


class Kind(str, Enum):
    ETA0 = "Eta0"
    ETA1 = "Eta1"
    INDICATOR01 = "Indicator01"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Piece:
    """``a + b*t`` (form "lin") or ``a + b*log t`` (form "log") on ``[lo, hi]``."""

    lo: float
    hi: float
    form: str
    a: float
    b: float

    def value(self, t):
        t = np.asarray(t, dtype=float)
        if self.form == "lin":
            return self.a + self.b * t
        return self.a + self.b * np.log(t)

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        if self.form == "lin":
            return np.full_like(t, self.b)
        return self.b / t

    def root(self):
        """Zero of the piece strictly inside ``(lo, hi)``, or None."""
        if self.b == 0:
            return None
        r = -self.a / self.b if self.form == "lin" else math.exp(-self.a / self.b)
        return r if self.lo < r < self.hi else None

    def antideriv(self, t):
        if self.form == "lin":
            return self.a * t + self.b * t * t / 2
        return self.a * t + self.b * (t * math.log(t) - t)

    def antideriv_sq(self, t):
        if self.form == "lin":
            return self.a ** 2 * t + self.a * self.b * t ** 2 + self.b ** 2 * t ** 3 / 3
        u = self.a + self.b * math.log(t)
        return t * (u * u - 2 * self.b * u + 2 * self.b ** 2)

    def self_deriv(self, t):
        """The product of the piece with its derivative."""
        return float(self.value(t) * self.deriv(t))

    def self_deriv_critical(self):
        if self.form == "lin" or self.b == 0:
            return None
        r = math.exp(1 - self.a / self.b)
        return r if self.lo < r < self.hi else None

    def mellin(self, s, t):
        """Antiderivative of ``piece(t) t^(s-1)`` in ``t`` (vectorised over s)."""
        lt = math.log(t)
        ts = np.exp(s * lt)
        if self.form == "lin":
            return self.a * ts / s + self.b * ts * t / (s + 1)
        return self.a * ts / s + self.b * (ts * lt / s - ts / (s * s))


@dataclass(frozen=True)
class CutoffNorms:
    l1: float
    l2: float
    linf: float
    tv1: float
    tv2: float
    linf_deriv: float
    l1_self_deriv: float
    l1_second_combo: float


@dataclass(frozen=True)
class CutoffFn:
    """A nonnegative compactly supported cutoff given by closed-form pieces."""

    kind: Kind
    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a cutoff needs at least one piece")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if p.hi != q.lo:
                raise ValueError("pieces must be contiguous")
        for p in self.pieces:
            if not (math.isfinite(p.lo) and math.isfinite(p.hi)):
                raise ValueError("unbounded support is not supported")
            if p.form not in ("lin", "log"):
                raise ValueError(f"unknown piece form {p.form!r}")
            if p.form == "log" and p.lo <= 0:
                raise ValueError("log pieces must stay away from 0")

    @property
    def breakpoints(self):
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    @property
    def support(self):
        return self.pieces[0].lo, self.pieces[-1].hi

    def __call__(self, t):
        return evaluate(self, t)

    @cached_property
    def norms(self) -> CutoffNorms:
        return _norms(self)

    def __hash__(self):
        return hash((self.kind, self.pieces))


def custom(pieces) -> CutoffFn:
    """A user-defined cutoff from ``(lo, hi, form, a, b)`` tuples."""
    return CutoffFn(Kind.CUSTOM, tuple(Piece(*p) for p in pieces))


ETA0 = CutoffFn(
    Kind.ETA0,
    (
        Piece(0.25, 0.5, "log", 4 * math.log(4.0), 4.0),
        Piece(0.5, 1.0, "log", 0.0, -4.0),
    ),
)
ETA1 = CutoffFn(
    Kind.ETA1,
    (
        Piece(0.1, 0.2, "lin", -1.0, 10.0),
        Piece(0.2, 0.8, "lin", 1.0, 0.0),
        Piece(0.8, 0.9, "lin", 9.0, -10.0),
    ),
)
INDICATOR01 = CutoffFn(Kind.INDICATOR01, (Piece(0.0, 1.0, "lin", 1.0, 0.0),))


def evaluate(f: CutoffFn, t):
    """Value of the cutoff at ``t`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    out = np.zeros(t_arr.shape)
    last = len(f.pieces) - 1
    for i, p in enumerate(f.pieces):
        m = (t_arr >= p.lo) & ((t_arr < p.hi) if i < last else (t_arr <= p.hi))
        if m.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                out[m] = p.value(t_arr[m])
    out = np.maximum(out, 0.0)
    return float(out) if np.ndim(t) == 0 else out


def _ends(f):
    """Left and right limits of each piece at its endpoints."""
    return [(float(p.value(p.lo)), float(p.value(p.hi))) for p in f.pieces]


def _jumps(values):
    """Jumps of a piecewise function at breakpoints, including the support ends."""
    out = [abs(values[0][0])]
    out += [abs(values[i + 1][0] - values[i][1]) for i in range(len(values) - 1)]
    out.append(abs(values[-1][1]))
    return out


def _split(p, extra=()):
    pts = [p.lo] + sorted(r for r in extra if r is not None) + [p.hi]
    return list(zip(pts, pts[1:]))


def _norms(f: CutoffFn) -> CutoffNorms:
    vals = _ends(f)
    jumps = _jumps(vals)
    discontinuous = max(jumps) > 1e-12
    l1 = 0.0
    l2sq = 0.0
    tv1 = sum(jumps)
    linf = max(max(abs(u), abs(v)) for u, v in vals)
    for p in f.pieces:
        for lo, hi in _split(p, [p.root()]):
            l1 += abs(p.antideriv(hi) - p.antideriv(lo))
            tv1 += abs(float(p.value(hi) - p.value(lo)))
        l2sq += p.antideriv_sq(p.hi) - p.antideriv_sq(p.lo)
    if discontinuous:
        inf = math.inf
        return CutoffNorms(l1, math.sqrt(l2sq), linf, tv1, inf, inf, inf, inf)
    dvals = [(float(p.deriv(p.lo)), float(p.deriv(p.hi))) for p in f.pieces]
    tv2 = sum(_jumps(dvals)) + sum(abs(u - v) for u, v in dvals)
    linf_deriv = max(max(abs(u), abs(v)) for u, v in dvals)
    self_deriv = 0.0
    for p in f.pieces:
        for lo, hi in _split(p, [p.root()]):
            self_deriv += abs(float(p.value(hi)) ** 2 - float(p.value(lo)) ** 2) / 2
    gvals = [(p.self_deriv(p.lo), p.self_deriv(p.hi)) for p in f.pieces]
    combo = sum(_jumps(gvals))
    for p in f.pieces:
        for lo, hi in _split(p, [p.self_deriv_critical()]):
            combo += abs(p.self_deriv(hi) - p.self_deriv(lo))
    return CutoffNorms(
        l1=l1,
        l2=math.sqrt(l2sq),
        linf=linf,
        tv1=tv1,
        tv2=tv2,
        linf_deriv=linf_deriv,
        l1_self_deriv=self_deriv,
        l1_second_combo=combo,
    )


def norms(f: CutoffFn) -> CutoffNorms:
    """Norms and total variations of a cutoff, by exact piecewise integration."""
    return f.norms


_GL_X, _GL_W = np.polynomial.legendre.leggauss(40)


def _gauss(fn, lo, hi):
    x = 0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * np.dot(_GL_W, fn(x))


def _fourier_piece(p: Piece, xi: float) -> complex:
    w = 2 * math.pi * xi
    length = p.hi - p.lo
    if abs(w) * length <= 2.0:
        # 40-point Gauss-Legendre is exact to rounding for so few oscillations
        re = _gauss(lambda y: p.value(y) * np.cos(w * y), p.lo, p.hi)
        im = _gauss(lambda y: p.value(y) * np.sin(w * y), p.lo, p.hi)
        return complex(re, im)
    if p.form == "lin":
        def prim(y):
            e = complex(math.cos(w * y), math.sin(w * y))
            return (p.a + p.b * y) * e / (1j * w) + p.b * e / (w * w)
        return prim(p.hi) - prim(p.lo)
    g = lambda y: p.a + p.b * math.log(y)
    kw = dict(weight="cos", wvar=w, epsabs=1e-13, epsrel=1e-12, limit=400)
    re = integrate.quad(g, p.lo, p.hi, **kw)[0]
    kw["weight"] = "sin"
    im = integrate.quad(g, p.lo, p.hi, **kw)[0]
    return complex(re, im)


def fourier(f: CutoffFn, xi):
    """The transform ``int f(y) e(xi y) dy`` at a scalar or an array of ``xi``."""
    xs = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.array([sum(_fourier_piece(p, float(x)) for p in f.pieces) for x in xs])
    return complex(out[0]) if np.ndim(xi) == 0 else out


def mellin(f: CutoffFn, s):
    """The transform ``int f(t) t^(s-1) dt`` at complex ``s`` (scalar or array)."""
    s_arr = np.asarray(s, dtype=complex)
    total = np.zeros(s_arr.shape, dtype=complex)
    for p in f.pieces:
        if p.lo == 0:
            total += p.mellin(s_arr, p.hi)
        else:
            total += p.mellin(s_arr, p.hi) - p.mellin(s_arr, p.lo)
    return complex(total) if np.ndim(s) == 0 else total


def eta0_factorization_check(d: float, w: float, x: float):
    """Compare ``eta0(dw/x)`` with its integral over dyadic scales.

    The right side is ``4 int 1[x/2W <= d <= x/W] 1[W/2 <= w <= W] dW/W``,
    whose integrand is the indicator of an interval in ``W``.
    """
    from .reports import BoundReport

    if min(d, w, x) <= 0:
        raise ValueError("d, w, x must be positive")
    lhs = evaluate(ETA0, d * w / x)
    lo = max(x / (2 * d), w)
    hi = min(x / d, 2 * w)
    rhs = 4 * math.log(hi / lo) if hi > lo else 0.0
    return BoundReport(
        bound=rhs,
        actual=lhs,
        details={"deviation": abs(lhs - rhs), "W_range": (lo, hi)},
    )


def _eta1_product_integral(shift):
    """Exact piecewise integration of ``eta1(s) eta1(shift - s)`` in s."""
    pts = sorted(
        {0.1, 0.2, 0.8, 0.9}
        | {shift - 0.9, shift - 0.8, shift - 0.2, shift - 0.1}
    )
    total = 0.0
    for lo, hi in zip(pts, pts[1:]):
        if hi <= lo:
            continue
        # both factors are affine on [lo, hi]; Simpson's rule is exact for quadratics
        mid = 0.5 * (lo + hi)
        fv = [evaluate(ETA1, u) * evaluate(ETA1, shift - u) for u in (lo, mid, hi)]
        total += (hi - lo) / 6 * (fv[0] + 4 * fv[1] + fv[2])
    return total


def eta1_selfconv(t: float, K: float) -> float:
    """``int eta1(s) eta1(1 - s - t/K) ds``, computed exactly."""
    if K < 1:
        raise ValueError("K must be at least 1")
    return _eta1_product_integral(1.0 - t / K)
