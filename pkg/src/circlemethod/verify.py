"""Direct verification of the even Goldbach conjecture and of short prime gaps."""
from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import arith, kernels
from .reports import BoundReport

GOLDBACH_CAP = 10 ** 9
BLOCK = 1 << 24
CANDIDATE_LIMIT = 1 << 15
GAP_THRESHOLD = 1.1e10
GAP_RATIO = 2.8e7


@dataclass
class GoldbachSummary:
    """Outcome of a verification run; identical whether or not it was resumed."""

    n_max: int
    checked: int
    max_least_p: int
    argmax: int
    exceptions: list = field(default_factory=list)
    digest: str = ""
    blocks: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.exceptions

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _fallback_least(n: int):
    p = 2
    while p <= n // 2:
        if kernels.is_prime_u64(p) and kernels.is_prime_u64(n - p):
            return p
        p += 1
    return 0


def _check_block(lo: int, hi: int, candidates: np.ndarray) -> dict:
    """Least Goldbach prime for every even n in ``[lo, hi]``."""
    flags_lo = max(0, lo - int(candidates[-1]))
    base = arith.primes_up_to(math.isqrt(hi) + 1)
    flags = kernels.sieve_flags(flags_lo, hi + 1, base)
    least = np.asarray(kernels.goldbach_least(flags, flags_lo, lo, hi, candidates))
    exceptions = []
    for i in np.flatnonzero(least == 0):
        n = lo + 2 * int(i)
        p = _fallback_least(n)
        least[i] = p
        if p == 0:
            exceptions.append(n)
    k = int(np.argmax(least))
    return {
        "kind": "block",
        "lo": lo,
        "hi": hi,
        "count": int(least.size),
        "max_least": int(least[k]),
        "argmax": lo + 2 * k,
        "exceptions": exceptions,
        "digest": hashlib.sha256(least.astype("<i8").tobytes()).hexdigest(),
    }


def _read_checkpoint(path: Path, header: dict) -> list:
    if not path.exists():
        return []
    records = []
    with open(path) as fh:
        for line in fh:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                break  # torn final line from an interrupted write
            records.append(rec)
    if not records:
        return []
    if records[0] != header:
        raise ValueError(f"checkpoint {path} was written for different parameters")
    return [r for r in records[1:] if r.get("kind") == "block"]


def goldbach_verify(
    n_max: int,
    checkpoint=None,
    resume: bool = False,
    block: int = BLOCK,
    cap: int = GOLDBACH_CAP,
    stop_after: int | None = None,
) -> GoldbachSummary:
    """Find the least prime ``p`` with ``n - p`` prime for every even ``4 <= n <= n_max``.

    Args:
        n_max: upper limit.
        checkpoint: optional JSON-lines file; one record per finished block.
        resume: continue from the records already in ``checkpoint``.
        block: integers per block (even); block boundaries depend only on this.
        cap: refuse larger ``n_max`` with :class:`arith.ResourceError`.
        stop_after: process at most this many new blocks and return a partial
            summary (used to simulate interruption).
    """
    n_max = int(n_max)
    if n_max > cap:
        raise arith.ResourceError(f"n_max = {n_max} exceeds the cap {cap}")
    if block % 2:
        raise ValueError("block must be even")
    t0 = time.perf_counter()
    header = {"kind": "header", "version": 1, "n_max": n_max, "block": block}
    path = Path(checkpoint) if checkpoint else None
    done = _read_checkpoint(path, header) if (path and resume) else []
    if path and not done:
        with open(path, "w") as fh:
            fh.write(json.dumps(header) + "\n")
    candidates = arith.primes_up_to(CANDIDATE_LIMIT)
    records = list(done)
    starts = list(range(4, n_max + 1, block))
    new = 0
    for i, lo in enumerate(starts):
        if i < len(done):
            if done[i]["lo"] != lo:
                raise ValueError("checkpoint blocks out of order")
            continue
        if stop_after is not None and new >= stop_after:
            break
        hi = min(lo + block - 2, n_max - (n_max % 2))
        rec = _check_block(lo, hi, candidates)
        records.append(rec)
        new += 1
        if path:
            with open(path, "a") as fh:
                fh.write(json.dumps(rec) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
    h = hashlib.sha256()
    best, arg, exc, checked = 0, 0, [], 0
    for rec in records:
        h.update(rec["digest"].encode())
        checked += rec["count"]
        exc.extend(rec["exceptions"])
        if rec["max_least"] > best:
            best, arg = rec["max_least"], rec["argmax"]
    return GoldbachSummary(
        n_max=n_max,
        checked=checked,
        max_least_p=best,
        argmax=arg,
        exceptions=exc,
        digest=h.hexdigest(),
        blocks=len(records),
        elapsed=time.perf_counter() - t0,
    )


def prime_gap_check(x: int) -> BoundReport:
    """Largest prime ``p <= x`` against the allowance ``x - p <= x / 2.8e7``."""
    x = int(x)
    if x < GAP_THRESHOLD:
        raise ValueError("the gap statement needs x >= 1.1e10")
    if x >= 1 << 64:
        raise ValueError("x must be below 2**64")
    p = x
    while not kernels.is_prime_u64(p):
        p -= 1
    return BoundReport(bound=x / GAP_RATIO, actual=float(x - p), details={"x": x, "prime": p})


def psi_check(y: float) -> BoundReport:
    """``|psi(y) - y|`` against the allowance ``y / (40 log y)``."""
    if y < 2:
        raise ValueError("y must be at least 2")
    psi = arith.chebyshev_psi(y)
    return BoundReport(
        bound=y / (40 * math.log(y)),
        actual=abs(psi - y),
        details={"y": y, "psi": psi, "relative": (psi - y) / y},
    )
