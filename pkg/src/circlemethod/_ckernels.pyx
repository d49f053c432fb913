# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; semantics mirror ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log, sqrt, floor, round as cround
from libc.stdint cimport int64_t, uint64_t, uint8_t, int8_t

cnp.import_array()

cdef extern from *:
    """
    typedef unsigned __int128 cm_u128;
    static inline unsigned long long cm_mulmod(unsigned long long a,
                                               unsigned long long b,
                                               unsigned long long m) {
        return (unsigned long long)(((cm_u128)a * b) % m);
    }
    """
    unsigned long long cm_mulmod(unsigned long long a, unsigned long long b,
                                 unsigned long long m) nogil

cdef double TWO_PI = 6.283185307179586476925286766559
cdef int PHASE_BITS = 26
cdef double PHASE_SCALE = 67108864.0
cdef int64_t PHASE_MASK = (1 << 26) - 1


def sieve_flags(int64_t lo, int64_t hi, base_primes):
    cdef int64_t n = hi - lo
    if n < 0:
        n = 0
    cdef cnp.ndarray[uint8_t, ndim=1] flags = np.ones(n, dtype=np.uint8)
    if n == 0:
        return flags
    cdef const int64_t[:] bp = np.ascontiguousarray(base_primes, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int64_t p, start, j
    cdef uint8_t[:] f = flags
    with nogil:
        for i in range(bp.shape[0]):
            p = bp[i]
            if p * p >= hi:
                break
            start = ((lo + p - 1) // p) * p
            if start < p * p:
                start = p * p
            j = start - lo
            while j < n:
                f[j] = 0
                j += p
        j = 0
        while j < n and lo + j < 2:
            f[j] = 0
            j += 1
    return flags


def mangoldt_mobius(int64_t lo, int64_t hi, base_primes):
    cdef int64_t n = hi - lo
    cdef cnp.ndarray[double, ndim=1] lam_a = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[int8_t, ndim=1] mu_a = np.ones(n, dtype=np.int8)
    cdef cnp.ndarray[int64_t, ndim=1] rem_a = np.arange(lo, hi, dtype=np.int64)
    cdef double[:] lam = lam_a
    cdef int8_t[:] mu = mu_a
    cdef int64_t[:] rem = rem_a
    cdef const int64_t[:] bp = np.ascontiguousarray(base_primes, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int64_t p, j, q, pp
    cdef double lp
    with nogil:
        for i in range(bp.shape[0]):
            p = bp[i]
            if p * p >= hi:
                break
            lp = log(<double>p)
            j = ((lo + p - 1) // p) * p - lo
            while j < n:
                mu[j] = -mu[j]
                rem[j] //= p
                while rem[j] != 0 and rem[j] % p == 0:
                    rem[j] //= p
                    mu[j] = 0
                j += p
            q = p
            while q < hi:
                if q >= lo:
                    lam[q - lo] = lp
                if q > hi // p:
                    break
                q *= p
        for j in range(n):
            if rem[j] > 1:
                mu[j] = -mu[j]
                if rem[j] == lo + j:
                    lam[j] = log(<double>(lo + j))
        if lo <= 0 and 0 < hi:
            mu[-lo] = 0
        if lo <= 1 and 1 < hi:
            mu[1 - lo] = 1
            lam[1 - lo] = 0.0
    return lam_a, mu_a


cdef inline double _phase(int64_t nn, int64_t m, double a_lo) nogil:
    cdef double ph = (<double>((nn * m) & PHASE_MASK)) / PHASE_SCALE + a_lo * <double>nn
    return ph - floor(ph)


def expsum(ns, weights, alphas):
    cdef const int64_t[:] n_v = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[:] w_v = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[:] a_v = np.ascontiguousarray(np.atleast_1d(np.asarray(alphas, dtype=np.float64)))
    cdef Py_ssize_t na = a_v.shape[0], nn = n_v.shape[0], i, j
    out = np.empty(na, dtype=np.complex128)
    cdef double complex[:] o = out
    cdef double alpha, a_hi, a_lo, th, re, im, cr, ci, y, t
    cdef int64_t m
    with nogil:
        for j in range(na):
            alpha = a_v[j] - cround(a_v[j])
            a_hi = cround(alpha * PHASE_SCALE)
            a_lo = alpha - a_hi / PHASE_SCALE
            m = <int64_t>a_hi
            re = 0.0
            im = 0.0
            cr = 0.0
            ci = 0.0
            for i in range(nn):
                th = TWO_PI * _phase(n_v[i], m, a_lo)
                y = w_v[i] * cos(th) - cr
                t = re + y
                cr = (t - re) - y
                re = t
                y = w_v[i] * sin(th) - ci
                t = im + y
                ci = (t - im) - y
                im = t
            o[j] = re + 1j * im
    return out


def expsum_prefix_absmax(ns, weights, double alpha):
    cdef const int64_t[:] n_v = np.ascontiguousarray(ns, dtype=np.int64)
    cdef const double[:] w_v = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t i, nn = n_v.shape[0]
    cdef double a, a_hi, a_lo, th, re = 0.0, im = 0.0, best = 0.0, v
    cdef int64_t m
    a = alpha - cround(alpha)
    a_hi = cround(a * PHASE_SCALE)
    a_lo = a - a_hi / PHASE_SCALE
    m = <int64_t>a_hi
    with nogil:
        for i in range(nn):
            th = TWO_PI * _phase(n_v[i], m, a_lo)
            re += w_v[i] * cos(th)
            im += w_v[i] * sin(th)
            v = re * re + im * im
            if v > best:
                best = v
    return sqrt(best)


def dirichlet_convolve(f, g):
    cdef const double[:] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef const double[:] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t size = min(fv.shape[0], gv.shape[0])
    h_a = np.zeros(size, dtype=np.float64)
    cdef double[:] h = h_a
    cdef Py_ssize_t d, k, top = size - 1
    cdef double fd
    with nogil:
        for d in range(1, size):
            fd = fv[d]
            if fd == 0.0:
                continue
            k = 1
            while d * k <= top:
                h[d * k] += fd * gv[k]
                k += 1
    return h_a


def goldbach_least(flags, int64_t flags_lo, int64_t n_lo, int64_t n_hi, small_primes):
    cdef const uint8_t[:] fl = np.ascontiguousarray(flags, dtype=np.uint8)
    cdef const int64_t[:] sp = np.ascontiguousarray(small_primes, dtype=np.int64)
    cdef Py_ssize_t count = (n_hi - n_lo) // 2 + 1 if n_hi >= n_lo else 0
    least_a = np.zeros(count, dtype=np.int64)
    cdef int64_t[:] least = least_a
    cdef Py_ssize_t i, k, nsp = sp.shape[0]
    cdef int64_t nval, c
    with nogil:
        for i in range(count):
            nval = n_lo + 2 * i
            for k in range(nsp):
                c = nval - sp[k]
                if c < 2:
                    break
                if fl[c - flags_lo]:
                    least[i] = sp[k]
                    break
    return least_a


cdef bint _mr_witness(unsigned long long a, unsigned long long d, int s,
                      unsigned long long n) nogil:
    cdef unsigned long long x = 1, b = a % n, e = d
    cdef int r
    while e:
        if e & 1:
            x = cm_mulmod(x, b, n)
        b = cm_mulmod(b, b, n)
        e >>= 1
    if x == 1 or x == n - 1:
        return False
    for r in range(s - 1):
        x = cm_mulmod(x, x, n)
        if x == n - 1:
            return False
    return True


def is_prime_u64(n_in):
    cdef unsigned long long n = <unsigned long long>int(n_in)
    cdef unsigned long long[12] bases = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    cdef unsigned long long d
    cdef int s = 0, i
    if n < 2:
        return False
    for i in range(12):
        if n % bases[i] == 0:
            return n == bases[i]
    d = n - 1
    while d % 2 == 0:
        d //= 2
        s += 1
    for i in range(12):
        if _mr_witness(bases[i], d, s, n):
            return False
    return True
