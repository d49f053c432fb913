"""Zeta-zero tables, the explicit formula, and the major-arc approximation.

Near ``alpha = 0`` the prime sum is approximated by ``x`` times the Fourier
transform of the cutoff; the error is controlled by the zeros up to the table
height, all assumed to lie on the critical line, plus a tail over higher zeros.
At desk scale the table height plays the role of the verification height.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import integrate

from .cutoffs import CutoffFn, fourier, mellin
from .expsum import SumSpec, s_eval
from .reports import BoundReport, InequalityCheck

ENV_ZEROS = "CIRCLEMETHOD_ZEROS"
REFERENCE_ORDINATES = (14.134725, 21.022040, 25.010858)


class ZeroTableError(ValueError):
    """A zero table failed to parse or validate."""


@dataclass(frozen=True)
class ZeroTable:
    """Positive ordinates of the zeros up to ``height``, ascending.

    Every zero with ``0 < Im rho <= height`` is assumed present and on the
    critical line, so ``count`` is the zero-counting function at ``height``.
    """

    gammas: np.ndarray
    height: float

    @property
    def count(self) -> int:
        return int(self.gammas.size)

    def truncated(self, n: int) -> "ZeroTable":
        """The first ``n`` zeros, with the height lowered to the last one kept."""
        g = self.gammas[:n]
        return ZeroTable(g, float(g[-1]) if g.size else 0.0)


def _parse(lines, source):
    gammas, height = [], None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("height:"):
                try:
                    height = float(body.split(":", 1)[1])
                except ValueError:
                    raise ZeroTableError(f"{source}:{lineno}: unparsable height header") from None
            continue
        try:
            g = float(line)
        except ValueError:
            raise ZeroTableError(f"{source}:{lineno}: unparsable ordinate {line!r}") from None
        if not math.isfinite(g) or g <= 0:
            raise ZeroTableError(f"{source}:{lineno}: ordinate must be positive and finite")
        if gammas and g <= gammas[-1]:
            raise ZeroTableError(f"{source}:{lineno}: ordinates not strictly ascending")
        gammas.append(g)
    if not gammas:
        raise ZeroTableError(f"{source}: no ordinates found")
    if gammas[0] < 14.13:
        raise ZeroTableError(f"{source}: first ordinate {gammas[0]} is below the first zero")
    for k, (got, ref) in enumerate(zip(gammas, REFERENCE_ORDINATES)):
        if abs(got - ref) > 1e-5:
            raise ZeroTableError(f"{source}: ordinate {k + 1} is {got}, expected {ref}")
    if height is None:
        height = gammas[-1]
    if height < gammas[-1]:
        raise ZeroTableError(f"{source}: declared height {height} is below the last ordinate")
    arr = np.array(gammas)
    arr.setflags(write=False)
    return ZeroTable(arr, float(height))


def default_zero_path() -> Path:
    env = os.environ.get(ENV_ZEROS)
    if env:
        return Path(env)
    return Path(str(resources.files("circlemethod") / "data" / "zeros_1e5.txt"))


@lru_cache(maxsize=4)
def _load_cached(path: str, mtime: float) -> ZeroTable:
    with open(path) as fh:
        return _parse(fh, path)


def load_zeros(path=None) -> ZeroTable:
    """Read a table of ordinates (one per line, ``#`` comments, optional ``# height: T``).

    Without a path the ``CIRCLEMETHOD_ZEROS`` variable is consulted, then the
    bundled table of the first 100000 zeros.
    """
    p = Path(path) if path is not None else default_zero_path()
    try:
        mtime = p.stat().st_mtime
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table {p}: {exc}") from None
    return _load_cached(str(p), mtime)


def a_constant(eta: CutoffFn | None, c_prime: float) -> float:
    """``60|eta|_1 + 32c'|eta'|_TV + 4c'^2|eta''|_TV``; ``None`` stands for the zero cutoff."""
    if eta is None:
        return 0.0
    n = eta.norms
    return 60 * n.l1 + 32 * c_prime * n.tv1 + 4 * c_prime ** 2 * n.tv2


def zero_tail_bound(T0: float) -> BoundReport:
    """Bound for ``sum 1/t^2`` over zeros above height T0, in two-term and one-term form.

    ``actual`` holds the two-term bound and ``bound`` the simplified
    ``log T0 / (3 T0)``, so a non-negative margin confirms the simplification.
    """
    L = math.log(T0 / (2 * math.pi))
    two_term = (L + 1) / (math.pi * T0) + 1.34 / T0 ** 2 * (2 * L + 1)
    simple = math.log(T0) / (3 * T0)
    return BoundReport(
        bound=simple,
        actual=two_term,
        hypotheses=[("T0 >= 1e3", T0 >= 1e3)],
        details={"two_term": two_term, "simplified": simple},
    )


def _smooth_term(eta: CutoffFn, x: float) -> float:
    # integrand of the trivial-zero correction, in the integration variable
    total = 0.0
    for p in eta.pieces:
        lo, hi = p.lo * x, p.hi * x
        val, _ = integrate.quad(lambda y: p.value(y / x) / (y ** 3 - y), lo, hi, epsabs=0, epsrel=1e-12)
        total += val
    return x * eta.norms.l1 - total


def explicit_formula(eta: CutoffFn, x: float, zeros: ZeroTable, detail: bool = False):
    """Truncated explicit formula for ``sum_n Lambda(n) eta(n/x)``.

    Each zero contributes ``x^rho M(rho)`` with ``M`` the Mellin transform of the
    cutoff, evaluated in closed form. Both members of each conjugate pair are
    summed separately so the imaginary part of the result measures rounding.

    Returns:
        The complex value, or with ``detail`` a dict that also holds the smooth
        term and the zero sum.
    """
    c = eta.support[0]
    if c * x < 2:
        raise ValueError("the scaled cutoff must be supported in [2, oo)")
    smooth = _smooth_term(eta, x)
    if zeros.count:
        lx = math.log(x)
        rho = 0.5 + 1j * zeros.gammas
        up = np.exp(rho * lx) * mellin(eta, rho)
        down = np.exp(np.conj(rho) * lx) * mellin(eta, np.conj(rho))
        zero_sum = complex(np.sum(up) + np.sum(down))
    else:
        zero_sum = 0j
    value = smooth - zero_sum
    if detail:
        return {"value": value, "smooth": smooth, "zero_sum": zero_sum, "zeros": zeros.count}
    return value


def explicit_formula_check(eta: CutoffFn, x: float, zeros: ZeroTable) -> InequalityCheck:
    """Truncated explicit formula against the direct sum, with the zero-tail budget."""
    direct = s_eval(SumSpec(x, eta), 0.0).value.real
    info = explicit_formula(eta, x, zeros, detail=True)
    T0 = zeros.height
    budget = a_constant(eta, eta.support[1]) * x * zero_tail_bound(T0).bound
    return InequalityCheck(
        lhs=abs(direct - info["value"]),
        rhs=budget,
        anchor="explicit formula truncated at the table height",
        hypotheses={"T0 >= 1e3": T0 >= 1e3},
        details={
            "direct": direct,
            "formula": info["value"],
            "imag_relative": abs(info["value"].imag) / max(abs(info["value"]), 1e-300),
            "T0": T0,
            "zeros": zeros.count,
        },
    )


@dataclass(frozen=True)
class MajorArcResult:
    s_value: complex
    main_term: complex
    residual: float
    bound: float
    a_const: float
    T0: float
    zeros: int

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound

    def to_dict(self) -> dict:
        return {
            "s_value": [self.s_value.real, self.s_value.imag],
            "main_term": [self.main_term.real, self.main_term.imag],
            "residual": self.residual,
            "bound": self.bound,
            "a_const": self.a_const,
            "T0": self.T0,
            "zeros": self.zeros,
            "passed": self.passed,
        }


def alpha_limit(x: float, eta: CutoffFn, zeros: ZeroTable) -> float:
    """Largest ``|alpha|`` for which the major-arc approximation applies."""
    return zeros.height / (4 * math.pi * eta.support[1] * x)


def major_arc_eval(x: float, alpha: float, eta: CutoffFn, zeros: ZeroTable) -> MajorArcResult:
    """Direct sum against ``x`` times the Fourier transform of the cutoff, with its bound."""
    c, c_prime = eta.support
    if c * x < 1e3:
        raise ValueError("major-arc approximation needs c x >= 1000")
    if abs(alpha) > alpha_limit(x, eta, zeros):
        raise ValueError(f"|alpha| = {abs(alpha)} exceeds the major-arc limit {alpha_limit(x, eta, zeros)}")
    s_value = s_eval(SumSpec(x, eta), alpha).value
    main = x * fourier(eta, alpha * x)
    T0 = zeros.height
    A = a_constant(eta, c_prime)
    bound = A * zero_tail_bound(T0).bound * x + 2.01 * c ** -0.5 * math.sqrt(x) * zeros.count * eta.norms.l1
    return MajorArcResult(s_value, main, abs(s_value - main), bound, A, T0, zeros.count)
