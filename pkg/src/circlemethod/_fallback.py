"""Pure numpy implementations of the hot kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and semantics; ``kernels`` picks one at import time.
"""
import numpy as np

_PHASE_BITS = 26
_PHASE_SCALE = float(1 << _PHASE_BITS)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def sieve_flags(lo, hi, base_primes):
    """Primality flags for the integers in ``[lo, hi)``.

    Args:
        lo: first integer of the window (>= 0).
        hi: one past the last integer.
        base_primes: ascending int64 array holding every prime up to
            ``isqrt(hi - 1)``.

    Returns:
        uint8 array of length ``hi - lo``; entry ``i`` is 1 iff ``lo + i`` is prime.
    """
    n = hi - lo
    flags = np.ones(max(n, 0), dtype=np.uint8)
    if n <= 0:
        return flags
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo::p] = 0
    flags[: max(0, min(2, hi) - lo)] = 0
    return flags


def mangoldt_mobius(lo, hi, base_primes):
    """Von Mangoldt and Moebius values on ``[lo, hi)`` by a segmented sieve.

    ``base_primes`` must contain every prime up to ``isqrt(hi - 1)``.

    Returns:
        Tuple ``(lam, mu)`` of float64 and int8 arrays of length ``hi - lo``.
        Entry 0 (the integer 0, if present) has ``lam = 0`` and ``mu = 0``.
    """
    n = hi - lo
    nums = np.arange(lo, hi, dtype=np.int64)
    rem = nums.copy()
    mu = np.ones(n, dtype=np.int8)
    lam = np.zeros(n, dtype=np.float64)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = -(-lo // p) * p
        if start >= hi:
            continue
        idx = slice(start - lo, n, p)
        mu[idx] *= -1
        rem[idx] //= p
        pp = p * p
        sq = -(-lo // pp) * pp
        if sq < hi:
            mu[sq - lo::pp] = 0
        # prime powers of p inside the window
        q = p
        while q < hi:
            if q >= lo:
                lam[q - lo] = np.log(p)
            q *= p
        # strip the remaining factors of p so the cofactor test below is exact
        sub = rem[idx]
        while True:
            mask = (sub % p == 0) & (sub != 0)
            if not mask.any():
                break
            sub[mask] //= p
        rem[idx] = sub
    big = rem > 1
    mu[big] *= -1
    # an integer whose cofactor is itself is a prime above the base range
    isprime_big = big & (rem == nums)
    lam[isprime_big] = np.log(nums[isprime_big].astype(np.float64))
    if lo <= 0 < hi:
        mu[-lo] = 0
    if lo <= 1 < hi:
        mu[1 - lo] = 1
        lam[1 - lo] = 0.0
    return lam, mu


def _phases(ns, alpha):
    """Fractional part of ``alpha * n`` with the integer part removed exactly."""
    alpha = alpha - np.round(alpha)
    a_hi = np.round(alpha * _PHASE_SCALE)
    a_lo = alpha - a_hi / _PHASE_SCALE
    m = np.int64(a_hi)
    frac_hi = ((ns * m) & np.int64((1 << _PHASE_BITS) - 1)).astype(np.float64) / _PHASE_SCALE
    ph = frac_hi + a_lo * ns.astype(np.float64)
    return ph - np.floor(ph)


def expsum(ns, weights, alphas):
    """Weighted exponential sums ``sum_i w_i e(alpha n_i)`` for each alpha.

    Args:
        ns: int64 array of integers, each below ``2**36``.
        weights: float64 array, same length as ``ns``.
        alphas: float64 array of frequencies.

    Returns:
        complex128 array, one value per alpha.
    """
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
    out = np.empty(alphas.size, dtype=np.complex128)
    chunk = 1 << 20
    for j, a in enumerate(alphas):
        re = 0.0
        im = 0.0
        for s in range(0, ns.size, chunk):
            th = 2 * np.pi * _phases(ns[s:s + chunk], a)
            w = weights[s:s + chunk]
            re += float(np.dot(w, np.cos(th)))
            im += float(np.dot(w, np.sin(th)))
        out[j] = complex(re, im)
    return out


def expsum_prefix_absmax(ns, weights, alpha):
    """``max_k |sum_{i<=k} w_i e(alpha n_i)|`` over all prefixes (ns ascending)."""
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    th = 2 * np.pi * _phases(ns, float(alpha))
    c = np.cumsum(weights * np.cos(th))
    s = np.cumsum(weights * np.sin(th))
    if c.size == 0:
        return 0.0
    return float(np.sqrt(c * c + s * s).max())


def dirichlet_convolve(f, g):
    """Dirichlet convolution ``h(n) = sum_{d | n} f(d) g(n/d)`` for ``1 <= n < N``.

    Arrays are indexed by n with index 0 unused; the output has the same length.
    """
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    size = min(f.size, g.size)
    h = np.zeros(size, dtype=np.float64)
    top = size - 1
    for d in np.flatnonzero(f[1:]) + 1:
        m = top // d
        h[d:d * m + 1:d] += f[d] * g[1:m + 1]
    return h


def goldbach_least(flags, flags_lo, n_lo, n_hi, small_primes):
    """Least prime ``p`` with ``n - p`` prime, for every even n in ``[n_lo, n_hi]``.

    Args:
        flags: primality flags of the window starting at ``flags_lo``; it must
            cover ``[n_lo - max(small_primes), n_hi]``.
        flags_lo: integer represented by ``flags[0]``.
        n_lo: first even number (even, >= 4).
        n_hi: last even number.
        small_primes: ascending int64 array of candidate primes.

    Returns:
        int64 array indexed by ``(n - n_lo) // 2``; 0 where no candidate works.
    """
    ns = np.arange(n_lo, n_hi + 1, 2, dtype=np.int64)
    least = np.zeros(ns.size, dtype=np.int64)
    todo = np.arange(ns.size)
    flags = np.asarray(flags, dtype=np.uint8)
    for p in small_primes:
        p = int(p)
        cand = ns[todo] - p
        ok = cand >= 2
        hit = np.zeros(todo.size, dtype=bool)
        hit[ok] = flags[cand[ok] - flags_lo] != 0
        least[todo[hit]] = p
        todo = todo[~hit]
        if todo.size == 0:
            break
    return least


def is_prime_u64(n):
    """Deterministic Miller-Rabin, exact for every n < 2**64."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
