"""Sieved arithmetic functions and primality utilities.

Windows of the von Mangoldt and Moebius functions come from a segmented sieve
running on the compiled kernels when available. Coprimality to the product of
all primes up to ``Q`` is tested against a prime list, never a big integer.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import kernels

SEGMENT = 1 << 20
MAX_WINDOW = 1 << 28

_MAGIC = b"CMAT"
_VERSION = 1
_HEADER = struct.Struct("<4sHHQQ")


class ResourceError(RuntimeError):
    """Raised when a request exceeds the configured memory budget."""


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    primes.setflags(write=False)
    return primes


def primes_up_to(limit) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    return _small_primes(int(math.floor(limit)))


def primes_in(lo: int, hi: int) -> np.ndarray:
    """All primes in the closed interval ``[lo, hi]``."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    base = _small_primes(math.isqrt(hi))
    out = []
    for s in range(lo, hi + 1, 1 << 24):
        e = min(s + (1 << 24), hi + 1)
        out.append(np.flatnonzero(kernels.sieve_flags(s, e, base)).astype(np.int64) + s)
    return np.concatenate(out)


@dataclass(frozen=True)
class ArithTable:
    """Von Mangoldt, Moebius and primality data on the window ``[lo, hi]``.

    Arrays are indexed by ``n - lo``; use :meth:`lam_at` and friends to index by n.
    """

    lo: int
    hi: int
    lam: np.ndarray
    mobius: np.ndarray
    is_prime: np.ndarray = field(repr=False)

    def __len__(self):
        return self.hi - self.lo + 1

    def lam_at(self, n):
        return self.lam[np.asarray(n) - self.lo]

    def mobius_at(self, n):
        return self.mobius[np.asarray(n) - self.lo]

    def is_prime_at(self, n):
        return self.is_prime[np.asarray(n) - self.lo]

    @property
    def integers(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def prime_powers(self):
        """Integers in the window with nonzero von Mangoldt value, and those values."""
        idx = np.flatnonzero(self.lam)
        return idx.astype(np.int64) + self.lo, self.lam[idx]

    def dump(self, path) -> None:
        """Write the window in the little-endian versioned binary format."""
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, 0, self.lo, self.hi))
            fh.write(np.ascontiguousarray(self.lam, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(self.mobius, dtype="i1").tobytes())
            fh.write(np.packbits(self.is_prime.astype(bool), bitorder="little").tobytes())

    @classmethod
    def load(cls, path) -> "ArithTable":
        """Read a window written by :meth:`dump`."""
        raw = Path(path).read_bytes()
        magic, version, _, lo, hi = _HEADER.unpack_from(raw)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not an arithmetic table dump")
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported table version {version}")
        n = hi - lo + 1
        off = _HEADER.size
        lam = np.frombuffer(raw, dtype="<f8", count=n, offset=off).astype(np.float64)
        off += 8 * n
        mobius = np.frombuffer(raw, dtype="i1", count=n, offset=off).astype(np.int8)
        off += n
        bits = np.frombuffer(raw, dtype=np.uint8, offset=off)
        is_prime = np.unpackbits(bits, count=n, bitorder="little").astype(bool)
        return cls(int(lo), int(hi), lam, mobius, is_prime)


def sieve(lo: int, hi: int, segment: int = SEGMENT, max_window: int = MAX_WINDOW) -> ArithTable:
    """Sieve the von Mangoldt and Moebius functions on ``[lo, hi]``.

    Args:
        lo: first integer, at least 1.
        hi: last integer.
        segment: integers per sieve segment.
        max_window: largest window accepted before raising ``ResourceError``.
    """
    lo = int(lo)
    hi = int(hi)
    if lo < 1 or hi < lo:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi - lo + 1 > max_window:
        raise ResourceError(f"window of {hi - lo + 1} integers exceeds budget {max_window}")
    base = _small_primes(math.isqrt(hi))
    lam_parts, mu_parts = [], []
    for s in range(lo, hi + 1, segment):
        e = min(s + segment, hi + 1)
        lam, mu = kernels.mangoldt_mobius(s, e, base)
        lam_parts.append(lam)
        mu_parts.append(mu)
    lam = np.concatenate(lam_parts)
    mu = np.concatenate(mu_parts)
    nums = np.arange(lo, hi + 1, dtype=np.float64)
    # a prime is the only prime power whose von Mangoldt value is its own log
    is_prime = (lam > 0) & np.isclose(lam, np.log(nums), rtol=1e-14, atol=0)
    for arr in (lam, mu, is_prime):
        arr.setflags(write=False)
    return ArithTable(lo, hi, lam, mu, is_prime)


def factorize(n: int) -> dict:
    """Prime factorization of a positive integer by trial division."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    """Euler's totient function."""
    result = int(n)
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


def coprime_to_primorial(n: int, Q: float) -> bool:
    """True iff every prime factor of ``n`` exceeds ``Q``."""
    return PrimorialCondition(Q).contains(n)


@dataclass(frozen=True)
class PrimorialCondition:
    """Coprimality with the product of all primes up to ``bound``."""

    bound: float

    @property
    def primes(self) -> np.ndarray:
        return primes_up_to(self.bound)

    def contains(self, n: int) -> bool:
        n = int(n)
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return True
        for p in self.primes:
            p = int(p)
            if p * p > n:
                # n has no prime factor <= sqrt(n) < p, so it is a prime above p
                return n > self.bound
            if n % p == 0:
                return False
        return True

    def mask(self, ns) -> np.ndarray:
        """Vectorised membership for an integer array."""
        ns = np.asarray(ns, dtype=np.int64)
        keep = np.ones(ns.shape, dtype=bool)
        for p in self.primes:
            keep &= ns % p != 0
        return keep

    def mask_prime_bases(self, bases) -> np.ndarray:
        """Membership for prime powers given by their prime bases."""
        return np.asarray(bases) > self.bound


def chebyshev_theta(y) -> float:
    """Sum of ``log p`` over primes ``p <= y``."""
    y = int(math.floor(y))
    if y < 2:
        return 0.0
    base = _small_primes(math.isqrt(y))
    parts = []
    for s in range(2, y + 1, 1 << 24):
        e = min(s + (1 << 24), y + 1)
        ps = np.flatnonzero(kernels.sieve_flags(s, e, base)) + s
        parts.append(float(np.log(ps.astype(np.float64)).sum()))
    return math.fsum(parts)


def chebyshev_psi(y) -> float:
    """Sum of the von Mangoldt function over ``n <= y``."""
    if y < 2:
        return 0.0
    parts = []
    k = 1
    while 2 ** k <= y:
        root = math.floor(y ** (1.0 / k))
        while (root + 1) ** k <= y:
            root += 1
        while root ** k > y:
            root -= 1
        parts.append(chebyshev_theta(root))
        k += 1
    return math.fsum(parts)


def is_prime_u64(n: int) -> bool:
    """Deterministic primality for ``0 <= n < 2**64``."""
    n = int(n)
    if n < 0 or n >= 1 << 64:
        raise ValueError("n must lie in [0, 2**64)")
    return bool(kernels.is_prime_u64(n))
