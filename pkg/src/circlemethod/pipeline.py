"""Run configuration and the desk-scale three-prime count.

The count weights triples of primes by smooth cutoffs and by the number of
ways the remaining gap ``x - n1 - n2 - n3`` splits into three shifts in
``[1, H]``. It is computed twice: as a finite convolution, and as the integral
over the circle of the product of the three exponential sums, the cubed
shift kernel and ``e(-x alpha)``. All factors are trigonometric polynomials,
so an equispaced rule with more nodes than the spread of frequencies
integrates them exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import arith
from .cutoffs import ETA0, ETA1
from .expsum import SumSpec, terms

CONFIG_VERSION = 1
DESK_X_CAP = 10 ** 6
DESK_N0_CAP = 10 ** 4


@dataclass
class PipelineConfig:
    """Parameters of the five-primes argument.

    The defaults are the values used for the arithmetic-only checks at the
    true scale. ``desk`` marks surrogate values for runs that evaluate sums;
    every report produced from a desk config says so.
    """

    x: int = 10 ** 5 + 1
    K: float = 1e3
    N0: float = 4e14
    T0: float = 3.29e9
    N_T0: float = 1e10
    zero_table: str | None = None
    desk: bool = False
    caps: dict = field(default_factory=lambda: {"direct": 10 ** 9, "goldbach": 10 ** 9})

    @classmethod
    def full_scale(cls) -> "PipelineConfig":
        return cls()

    @classmethod
    def desk_default(cls) -> "PipelineConfig":
        return cls(x=10 ** 5 + 1, K=10.0, N0=300.0, T0=74920.8274989942, N_T0=1e5, desk=True)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        """Read a JSON config; unknown keys are rejected."""
        data = json.loads(Path(path).read_text())
        version = data.pop("version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise ValueError(f"unsupported config version {version}")
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["version"] = CONFIG_VERSION
        return d


def shift_counts(H: int, size: int) -> np.ndarray:
    """``r[m]`` = number of ``(h1, h2, h3)`` in ``[1, H]^3`` with sum ``m``, for ``m < size``."""
    m = np.arange(size, dtype=np.int64)
    t = m - 3

    def c2(n):
        n = np.maximum(n, 0)
        return n * (n - 1) // 2

    r = c2(t + 2) - 3 * c2(t - H + 2) + 3 * c2(t - 2 * H + 2) - c2(t - 3 * H + 2)
    r[t < 0] = 0
    return r


def _weights(x: int, K: float):
    first = SumSpec(float(x), ETA1, primorial=math.sqrt(x))
    third = SumSpec(x / K, ETA0, primorial=math.sqrt(x / K))
    n1, w1 = terms(first)
    n3, w3 = terms(third)
    return n1, w1, n3, w3


@dataclass(frozen=True)
class QuantResult:
    value: float
    positive: bool
    direct: float
    integral: float
    relative_difference: float
    nodes: int
    desk: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def quant_direct(x: int, K: float, N0s: int) -> float:
    """The count as a finite sum over pairs ``(n1, n3)``."""
    H = int(N0s // 3)
    n1, w1, n3, w3 = _weights(x, K)
    if n1.size == 0 or n3.size == 0 or H < 1:
        return 0.0
    dense = np.zeros(x + 1)
    dense[n1] = w1
    r = shift_counts(H, 3 * H + 1).astype(float)
    # g[t] = sum_{n2} w(n2) r(t - n2): the second prime folded with the shifts
    g = np.convolve(dense, r)[: x + 1]
    total = 0.0
    for a, wa in zip(n3, w3):
        rest = x - a - n1
        ok = rest >= 0
        total += wa * float(np.dot(w1[ok], g[rest[ok]]))
    return total


def quant_integral(x: int, K: float, N0s: int, nodes: int | None = None) -> tuple[float, int]:
    """The count as an exact equispaced quadrature of the circle integral."""
    H = int(N0s // 3)
    n1, w1, n3, w3 = _weights(x, K)
    if nodes is None:
        nodes = 1 << max(10, math.ceil(math.log2(2 * x + 3 * H + 2)))
    if n1.size == 0 or n3.size == 0 or H < 1:
        return 0.0, nodes

    def series(ns, ws):
        a = np.zeros(nodes)
        np.add.at(a, ns % nodes, ws)
        return np.fft.ifft(a) * nodes

    s1 = series(n1, w1)
    s3 = series(n3, w3)
    d = series(np.arange(1, H + 1), np.ones(H))
    phase = np.exp(-2j * np.pi * ((x * np.arange(nodes)) % nodes) / nodes)
    val = np.mean(s1 * s1 * s3 * d ** 3 * phase)
    return float(val.real), nodes


def quant_positive(x: int, K: float, N0s: int) -> QuantResult:
    """Dual computation of the desk three-prime count; positivity and agreement.

    Raises:
        arith.ResourceError: ``x`` or ``N0s`` above the desk caps.
        ValueError: ``K`` too large for the third prime's window to hold primes.
    """
    x = int(x)
    if x > DESK_X_CAP or N0s > DESK_N0_CAP:
        raise arith.ResourceError("quant_positive is limited to x <= 1e6 and N0s <= 1e4")
    if K > x / 1e3:
        raise ValueError("K must be at most x / 1000")
    direct = quant_direct(x, K, N0s)
    integral, nodes = quant_integral(x, K, N0s)
    scale = max(abs(direct), abs(integral))
    rel = abs(direct - integral) / scale if scale else 0.0
    return QuantResult(float(direct), bool(direct > 0), float(direct), float(integral), float(rel), nodes)
