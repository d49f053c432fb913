"""Time the compiled kernels against the numpy fallback on identical inputs.

Run with ``python3 benchmarks/bench_kernels.py``; add ``--quick`` for smaller
inputs. Each kernel is also checked for agreement between the two backends.
"""
import argparse
import math
import time

import numpy as np

from circlemethod import _fallback, arith

try:
    from circlemethod import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def _cases(scale):
    n = 10 ** 6 * scale
    base = arith.primes_up_to(math.isqrt(n) + 1)
    rng = np.random.default_rng(1)
    ns = np.flatnonzero(_fallback.sieve_flags(0, n, base)).astype(np.int64)
    w = np.log(ns.astype(float))
    alphas = rng.uniform(0, 1, 8)
    flags_hi = 2 * 10 ** 5 * scale
    flags = _fallback.sieve_flags(0, flags_hi, arith.primes_up_to(math.isqrt(flags_hi) + 1))
    small = arith.primes_up_to(1 << 15)
    big = [int(v) for v in rng.integers(10 ** 17, 10 ** 18, 2000 * scale)]
    f = rng.normal(size=5000 * scale)
    return {
        "sieve_flags": lambda m: m.sieve_flags(0, n, base),
        "mangoldt_mobius": lambda m: m.mangoldt_mobius(1, n // 4, base),
        "expsum": lambda m: m.expsum(ns, w, alphas),
        "expsum_prefix_absmax": lambda m: m.expsum_prefix_absmax(ns, w, float(alphas[0])),
        "dirichlet_convolve": lambda m: m.dirichlet_convolve(f, f),
        "goldbach_least": lambda m: m.goldbach_least(flags, 0, 4, flags_hi - 2, small),
        "is_prime_u64": lambda m: [m.is_prime_u64(v) for v in big],
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(u, v) for u, v in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind in "fc":
        return bool(np.allclose(a, b, rtol=1e-9, atol=1e-6))
    return bool(np.array_equal(a, b))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--quick", action="store_true")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not available; run: python3 setup.py build_ext --inplace")
        return 1
    cases = _cases(1 if args.quick else 4)
    print(f"{'kernel':<22}{'compiled s':>12}{'fallback s':>12}{'speedup':>9}  agree")
    for name, run in cases.items():
        tc, oc = _best(lambda: run(_ckernels), args.repeat)
        tf, of = _best(lambda: run(_fallback), args.repeat)
        print(f"{name:<22}{tc:>12.4f}{tf:>12.4f}{tf / tc:>9.1f}  {_same(oc, of)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
