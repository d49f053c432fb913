"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback
is used. Setting ``CIRCLEMETHOD_KERNELS=python`` forces the fallback and
``CIRCLEMETHOD_KERNELS=compiled`` makes a missing extension an import error.
"""
import os

from . import _fallback

_choice = os.environ.get("CIRCLEMETHOD_KERNELS", "auto").lower()

if _choice == "python":
    _impl = _fallback
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"

sieve_flags = _impl.sieve_flags
mangoldt_mobius = _impl.mangoldt_mobius
expsum = _impl.expsum
expsum_prefix_absmax = _impl.expsum_prefix_absmax
dirichlet_convolve = _impl.dirichlet_convolve
goldbach_least = _impl.goldbach_least
is_prime_u64 = _impl.is_prime_u64

__all__ = [
    "BACKEND",
    "sieve_flags",
    "mangoldt_mobius",
    "expsum",
    "expsum_prefix_absmax",
    "dirichlet_convolve",
    "goldbach_least",
    "is_prime_u64",
]
