#!/usr/bin/env python3
"""Generate a table of ordinates of nontrivial zeta zeros.

Build-time helper only; the library ingests tables and never computes zeros.

Z(t) is evaluated with the Riemann-Siegel formula (corrections C0..C4,
vectorised with numpy). Zeros are bracketed block by block between good Gram
points, with completeness checked by Rosser's rule, then polished by
bisection. Ordinates below ``--mp-below`` are re-polished with mpmath.

    python scripts/make_zero_table.py --count 100000 --out zeros.txt
"""
import argparse
import math
import sys
import time

import mpmath
import numpy as np

PI = math.pi


def _psi_taylor(n_coef=60):
    """Taylor coefficients at z=0 of Psi(z) = -cos(2 pi z^2 - 5pi/8)/cos(2 pi z)."""
    mpmath.mp.dps = 60
    radius = mpmath.mpf("0.9")
    m = 256
    vals = [
        -mpmath.cos(2 * mpmath.pi * z * z - 5 * mpmath.pi / 8) / mpmath.cos(2 * mpmath.pi * z)
        for z in (radius * mpmath.expjpi(2 * mpmath.mpf(j) / m) for j in range(m))
    ]
    coef = []
    for k in range(n_coef):
        s = mpmath.fsum(vals[j] * mpmath.expjpi(-2 * mpmath.mpf(j * k) / m) for j in range(m)) / m
        coef.append(float(mpmath.re(s) / radius**k))
    return np.polynomial.Polynomial(coef)


_PSI = _psi_taylor()
_DPSI = [_PSI.deriv(k) if k else _PSI for k in range(13)]


def theta(t):
    t = np.asarray(t, dtype=float)
    return (t / 2 * np.log(t / (2 * PI)) - t / 2 - PI / 8
            + 1 / (48 * t) + 7 / (5760 * t**3) + 31 / (80640 * t**5))


def _corrections(p):
    z = p - 0.5
    d = [dk(z) for dk in _DPSI]
    c0 = d[0]
    c1 = -d[3] / (96 * PI**2)
    c2 = d[2] / (64 * PI**2) + d[6] / (18432 * PI**4)
    c3 = -d[1] / (64 * PI**2) - d[5] / (3840 * PI**4) - d[9] / (5308416 * PI**6)
    c4 = (d[0] / (128 * PI**2) + 19 * d[4] / (24576 * PI**4)
          + 11 * d[8] / (5898240 * PI**6) + d[12] / (2038431744 * PI**8))
    return c0, c1, c2, c3, c4


def siegel_z(t, block=8192):
    """Hardy Z-function at an array of heights t >= 10."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    for s in range(0, t.size, block):
        tb = t[s:s + block]
        tau = np.sqrt(tb / (2 * PI))
        nmax = np.floor(tau).astype(np.int64)
        n = np.arange(1, int(nmax.max()) + 1, dtype=float)
        th = theta(tb)
        ph = th[:, None] - tb[:, None] * np.log(n)[None, :]
        terms = np.cos(ph) / np.sqrt(n)[None, :]
        terms[n[None, :] > nmax[:, None]] = 0.0
        main = 2 * terms.sum(axis=1)
        p = tau - nmax
        rem = sum(ck * tau ** (-k) for k, ck in enumerate(_corrections(p)))
        sign = np.where(nmax % 2 == 1, 1.0, -1.0)
        out[s:s + block] = main + sign * rem / np.sqrt(tau)
    return out


def gram_points(n):
    """g_k for k in n (theta(g_k) = k pi), by Newton iteration."""
    k = np.asarray(n, dtype=float)
    g = 2 * PI * np.exp(1 + np.real(_lambertw((k + 0.125) / math.e)))
    for _ in range(30):
        g = g - (theta(g) - k * PI) / (0.5 * np.log(g / (2 * PI)))
    return g


def _lambertw(x):
    from scipy.special import lambertw
    return lambertw(x)


def _sign_changes(ts, zs):
    s = np.sign(zs)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return [(ts[i], ts[i + 1]) for i in idx]


def find_zeros(count, log=print):
    kmax = count + 64
    ks = np.arange(-1, kmax + 1)
    g = gram_points(ks)
    zg = siegel_z(g)
    good = ((-1.0) ** ks) * zg > 0
    good_idx = np.nonzero(good)[0]
    log(f"gram points: {ks.size}, bad: {int((~good).sum())}")
    # Rosser blocks: between consecutive good Gram points g_j < g_k there are k - j zeros.
    sub = 4
    frac = np.arange(sub) / sub
    pts = (g[:-1, None] + (g[1:] - g[:-1])[:, None] * frac[None, :]).ravel()
    pts = np.append(pts, g[-1])
    zs = siegel_z(pts)
    sgn = np.sign(zs)
    change = sgn[:-1] * sgn[1:] < 0
    per_interval = change.reshape(-1, sub).sum(axis=1)
    brackets = []
    n_refined = 0
    for a, b in zip(good_idx[:-1], good_idx[1:]):
        expected = b - a
        if per_interval[a:b].sum() == expected:
            idx = np.nonzero(change[a * sub:b * sub])[0] + a * sub
            brackets.extend((pts[i], pts[i + 1]) for i in idx)
            continue
        n_refined += 1
        fine = sub * 4
        while True:
            fp = np.concatenate([np.linspace(g[i], g[i + 1], fine + 1)[:-1] for i in range(a, b)] + [g[b:b + 1]])
            found = _sign_changes(fp, siegel_z(fp))
            if len(found) == expected:
                brackets.extend(found)
                break
            if len(found) > expected or fine > 8192:
                raise RuntimeError(f"Rosser block [{g[a]}, {g[b]}]: {len(found)} sign changes, expected {expected}")
            fine *= 4
    log(f"blocks refined: {n_refined}")
    lo = np.array([u for u, _ in brackets])
    hi = np.array([v for _, v in brackets])
    zlo = siegel_z(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        zm = siegel_z(mid)
        left = np.sign(zm) == np.sign(zlo)
        lo = np.where(left, mid, lo)
        zlo = np.where(left, zm, zlo)
        hi = np.where(left, hi, mid)
    zeros = 0.5 * (lo + hi)
    zeros.sort()
    # N(g_k) = k + 1 at good Gram points
    last_good = good_idx[-1]
    n_expected = int(ks[last_good]) + 1
    n_found = int((zeros < g[last_good]).sum())
    if n_found != n_expected:
        raise RuntimeError(f"count mismatch below g_{ks[last_good]}: {n_found} vs {n_expected}")
    return zeros[:count]


def polish_low(zeros, below, dps=30):
    mpmath.mp.dps = dps
    out = zeros.copy()
    for i, z in enumerate(zeros):
        if z >= below:
            break
        out[i] = float(mpmath.findroot(mpmath.siegelz, mpmath.mpf(z)))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100000)
    ap.add_argument("--out", required=True)
    ap.add_argument("--mp-below", type=float, default=1000.0)
    args = ap.parse_args(argv)
    t0 = time.time()
    zeros = find_zeros(args.count, log=lambda m: print(m, file=sys.stderr))
    zeros = polish_low(zeros, args.mp_below)
    if np.any(np.diff(zeros) <= 0):
        raise RuntimeError("ordinates not strictly ascending")
    with open(args.out, "w") as fh:
        fh.write("# ordinates of the first %d nontrivial zeros of zeta (0 < gamma)\n" % zeros.size)
        fh.write("# Riemann-Siegel (C0..C4) + Rosser-block bracketing; mpmath polish below t=%g\n" % args.mp_below)
        fh.write("# height: %.10f\n" % zeros[-1])
        for z in zeros:
            fh.write("%.10f\n" % z)
    print(f"wrote {zeros.size} zeros to {args.out} in {time.time() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
