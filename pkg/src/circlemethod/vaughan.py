"""Vaughan's identity with the half-logarithm correction in the Type II weight.

The decomposition is instantiated for ``F(n) = e(alpha n) eta0(n/x)`` on odd
``n``. For each ``d`` the two inner Type I sums are combined with the
unimodular phase that makes the triangle inequality an equality, so the Type I
total is reproducible rather than an unknown-phase bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith, kernels
from .cutoffs import ETA0, evaluate
from .reports import InequalityCheck


@dataclass(frozen=True)
class VaughanParams:
    U: float
    V: float

    def __post_init__(self):
        if self.U < 1 or self.V < 1:
            raise ValueError("U and V must be at least 1")


@dataclass(frozen=True)
class TypeIIWeight:
    w: int
    value: float


def g_weight(w: int, V: float) -> TypeIIWeight:
    """``sum_{b | w, b > V} Lambda(b) - (1/2) log w``, from the factorisation of w."""
    w = int(w)
    if w < 1:
        raise ValueError("w must be positive")
    total = 0.0
    for p, e in arith.factorize(w).items():
        pk = 1
        for _ in range(e):
            pk *= p
            if pk > V:
                total += math.log(p)
    return TypeIIWeight(w, total - 0.5 * math.log(w))


@lru_cache(maxsize=4)
def _tables(n_max: int):
    t = arith.sieve(1, n_max)
    lam = np.zeros(n_max + 1)
    mu = np.zeros(n_max + 1)
    lam[1:] = t.lam
    mu[1:] = t.mobius
    logs = np.zeros(n_max + 1)
    logs[1:] = np.log(np.arange(1, n_max + 1, dtype=float))
    return lam, mu, logs


def _split(arr, cut, upper):
    idx = np.arange(arr.size)
    return np.where((idx > cut) if upper else (idx <= cut), arr, 0.0)


def g_array(n_max: int, V: float) -> np.ndarray:
    """The Type II weight for every ``w <= n_max`` (index 0 unused)."""
    lam, _, logs = _tables(n_max)
    big = kernels.dirichlet_convolve(_split(lam, V, True), np.ones(n_max + 1))
    out = big - 0.5 * logs
    out[0] = 0.0
    return out


def vaughan_identity_check(n_max: int, U: float, V: float) -> InequalityCheck:
    """Pointwise check of the four-term convolution identity for ``n <= n_max``."""
    if n_max > 10 ** 6:
        raise arith.ResourceError("identity checks are limited to n_max <= 1e6")
    lam, mu, logs = _tables(int(n_max))
    ones = np.ones(lam.size)
    conv = kernels.dirichlet_convolve
    mu_small, mu_big = _split(mu, U, False), _split(mu, U, True)
    lam_small, lam_big = _split(lam, V, False), _split(lam, V, True)
    rhs = (
        conv(mu_small, logs)
        - conv(conv(mu_small, lam_small), ones)
        + conv(mu_big, conv(lam_big, ones))
        + lam_small
    )
    dev = np.abs(rhs[1:] - lam[1:])
    return InequalityCheck(
        lhs=float(dev.max()),
        rhs=1e-9,
        anchor="Vaughan identity, pointwise",
        details={"argmax": int(dev.argmax()) + 1, "n_max": int(n_max), "U": U, "V": V},
    )


@dataclass(frozen=True)
class _Layout:
    x: float
    n_top: int
    support: np.ndarray
    eta: np.ndarray
    lam: np.ndarray
    type1_d: np.ndarray
    type1_m: np.ndarray
    type1_logn: np.ndarray
    n_d: int
    f_coef: np.ndarray
    mu: np.ndarray
    c_new: np.ndarray
    c_classical: np.ndarray
    bnd_d: np.ndarray
    bnd_m: np.ndarray
    bnd_logw: np.ndarray


@lru_cache(maxsize=4)
def _layout(x: float, U: float, V: float) -> _Layout:
    n_top = math.floor(x)
    lam, mu, logs = _tables(n_top)
    m = np.arange(math.ceil(x / 4), n_top + 1, dtype=np.int64)
    m = m[m % 2 == 1]
    eta = evaluate(ETA0, m / x)
    keep = eta > 0
    m, eta = m[keep], eta[keep]
    d_top = math.floor(U * V)
    ds, ns = [], []
    for d in range(1, min(d_top, n_top) + 1, 2):
        n = np.arange(math.ceil(x / (4 * d)), n_top // d + 1, dtype=np.int64)
        n = n[n % 2 == 1]
        ds.append(np.full(n.size, d, dtype=np.int64))
        ns.append(n)
    type1_d = np.concatenate(ds)
    type1_n = np.concatenate(ns)
    conv = kernels.dirichlet_convolve
    mu_small = _split(mu, U, False)
    mu_big = _split(mu, U, True)
    lam_small = _split(lam, V, False)
    f_coef = conv(mu_small, lam_small)
    big_div = conv(_split(lam, V, True), np.ones(lam.size))
    g = big_div - 0.5 * logs
    c_new = conv(mu_big, _split(g, V, True))
    c_classical = conv(mu_big, _split(big_div, V, True))
    bd, bm, bl = [], [], []
    for d in range(math.floor(U) + 1, min(d_top, n_top) + 1):
        if mu[d] == 0:
            continue
        w = np.arange(max(math.floor(V) + 1, math.ceil(x / (4 * d))), n_top // d + 1, dtype=np.int64)
        bd.append(np.full(w.size, d, dtype=np.int64))
        bm.append(w * d)
        bl.append(0.5 * np.log(w.astype(float)))
    empty_i = np.zeros(0, dtype=np.int64)
    return _Layout(
        x=x,
        n_top=n_top,
        support=m,
        eta=eta,
        lam=lam,
        type1_d=type1_d,
        type1_m=type1_d * type1_n,
        type1_logn=np.log(type1_n.astype(float)),
        n_d=min(d_top, n_top) + 1,
        f_coef=f_coef,
        mu=mu,
        c_new=c_new,
        c_classical=c_classical,
        bnd_d=np.concatenate(bd) if bd else empty_i,
        bnd_m=np.concatenate(bm) if bm else empty_i,
        bnd_logw=np.concatenate(bl) if bl else np.zeros(0),
    )


def _bincount_c(idx, w, size):
    return np.bincount(idx, w.real, size) + 1j * np.bincount(idx, w.imag, size)


@dataclass
class Decomposition:
    """Result of :func:`decompose`; unpacks as ``(T_I, T_II, c_d, check)``.

    ``c_d[i]`` is the phase used for the divisor ``divisors[i]``; divisors whose
    inner sums both vanish are omitted.
    """

    T_I: float
    T_II: float
    c_d: list
    check: InequalityCheck
    divisors: list

    def __iter__(self):
        return iter((self.T_I, self.T_II, self.c_d, self.check))


def decompose(x: float, alpha: float, params: VaughanParams) -> Decomposition:
    """Type I / Type II decomposition of the odd, eta0-weighted prime sum at ``alpha``."""
    U, V = float(params.U), float(params.V)
    hyps = {
        "UV <= x/4": U * V <= x / 4,
        "UV^2 >= x": U * V * V >= x,
        "U >= 40": U >= 40,
        "V >= 40": V >= 40,
    }
    L = _layout(float(x), U, V)
    F = np.zeros(L.n_top + 1, dtype=complex)
    frac = np.mod(alpha * L.support.astype(float), 1.0)
    F[L.support] = np.exp(2j * np.pi * frac) * L.eta
    fm = F[L.type1_m]
    A = _bincount_c(L.type1_d, L.type1_logn * fm, L.n_d)
    B = _bincount_c(L.type1_d, fm, L.n_d)
    ds = np.arange(L.n_d)
    logd = np.log(np.maximum(ds, 1).astype(float))
    t1 = float(np.sum(np.abs(A[1:]) + np.abs(B[1:]) * logd[1:]))
    divisors = [int(d) for d in np.flatnonzero((np.abs(A) > 0) | (np.abs(B) > 0))]
    c_d = []
    for d in divisors:
        pa = A[d] / abs(A[d]) if A[d] != 0 else 1.0
        pb = B[d] / abs(B[d]) if B[d] != 0 else 1.0
        c_d.append(complex(pa / pb))
    t2 = abs(complex(np.dot(L.c_new, F)))
    t2_classical = abs(complex(np.dot(L.c_classical, F)))
    bnd = _bincount_c(L.bnd_d, L.bnd_logw * F[L.bnd_m], L.n_d) if L.bnd_d.size else np.zeros(L.n_d)
    boundary = float(np.sum(np.abs(bnd)))
    target = complex(np.dot(L.lam, F))
    mu_u = np.where(ds <= U, L.mu[: L.n_d], 0.0)
    identity = (
        complex(np.dot(mu_u, A))
        - complex(np.dot(L.f_coef[: L.n_d], B))
        + complex(np.dot(L.c_classical, F))
    )
    check = InequalityCheck(
        lhs=abs(target),
        rhs=t1 + t2,
        anchor="Vaughan decomposition into Type I and Type II sums",
        hypotheses=hyps,
        details={
            "sum": target,
            "identity_residual": abs(identity - target),
            "T_II_classical": t2_classical,
            "boundary_type1": boundary,
        },
    )
    return Decomposition(t1, t2, c_d, check, divisors)
