"""Special functions, root finding and quadrature shared by the other modules.

All information quantities in the package are in bits.  ``LOG2E`` is the
``log e`` factor that appears next to square-root terms in the bounds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable

from scipy import integrate as _spi

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

_STD_NORMAL = NormalDist()


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(DomainError):
    """A stated precondition of a check does not hold, so no claim is made."""


class IndeterminateLimitError(DomainError):
    """A limit at infinite SNR depends on information that was not supplied."""


class NoBracketError(DomainError):
    """Bisection was called on an interval without a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative routine ran out of budget before meeting its tolerance."""


class ExtReal(float):
    """Nonnegative real number or +inf.

    Behaves as a ``float`` everywhere, except that ``inf - inf`` raises
    instead of quietly producing NaN.
    """

    def __new__(cls, value: float | str = 0.0) -> "ExtReal":
        if isinstance(value, str):
            text = value.strip().lower()
            value = math.inf if text in ("inf", "+inf", "infinity") else float(text)
        x = float.__new__(cls, value)
        if math.isnan(x) or x < 0.0:
            raise DomainError(f"extended real must be >= 0 or inf, got {value!r}")
        return x

    @property
    def is_inf(self) -> bool:
        return math.isinf(self)

    def __sub__(self, other):
        if math.isinf(self) and math.isinf(other) and other > 0:
            raise ArithmeticError("inf - inf is indeterminate")
        return float(self) - float(other)

    def __rsub__(self, other):
        if math.isinf(self) and math.isinf(other) and other > 0:
            raise ArithmeticError("inf - inf is indeterminate")
        return float(other) - float(self)

    def __add__(self, other):
        if math.isinf(self) and math.isinf(other) and other < 0:
            raise ArithmeticError("inf + (-inf) is indeterminate")
        return float(self) + float(other)

    __radd__ = __add__

    def __repr__(self) -> str:
        return "ExtReal(inf)" if self.is_inf else f"ExtReal({float(self)!r})"

    def __str__(self) -> str:
        return "inf" if self.is_inf else repr(float(self))


INF = ExtReal(math.inf)


def half_log2_1p(x: float) -> float:
    """0.5*log2(1 + x) with log(1 + inf) = inf."""
    if math.isinf(x):
        return math.inf
    return 0.5 * math.log1p(x) / LN2


@dataclass(frozen=True)
class SolverConfig:
    abs_tolerance: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if not self.abs_tolerance > 0:
            raise DomainError("abs_tolerance must be positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")


DEFAULT_SOLVER = SolverConfig()
# quadrature target; max_iterations is the subinterval budget
DEFAULT_QUAD = SolverConfig(abs_tolerance=1e-9, max_iterations=200)


def gaussian_cdf(x: float) -> float:
    """Standard normal CDF, accurate in relative terms in the left tail."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def gaussian_sf(x: float) -> float:
    """Standard normal upper tail Q(x) = 1 - Phi(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def gaussian_cdf_inv(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"gaussian_cdf_inv needs 0 < p < 1, got {p!r}")
    return _STD_NORMAL.inv_cdf(p)


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: SolverConfig = DEFAULT_SOLVER,
) -> float:
    """Root of a function with a sign change on [lo, hi].

    Stops once the bracket is no wider than ``cfg.abs_tolerance`` (or cannot
    shrink further in floating point) and returns its midpoint.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoBracketError(f"f({lo!r})={flo!r} and f({hi!r})={fhi!r} have the same sign")
    for _ in range(cfg.max_iterations):
        mid = 0.5 * (lo + hi)
        if hi - lo <= cfg.abs_tolerance or mid in (lo, hi):
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    if hi - lo <= cfg.abs_tolerance:
        return 0.5 * (lo + hi)
    raise ConvergenceError(
        f"bisection bracket [{lo!r}, {hi!r}] still wider than {cfg.abs_tolerance} "
        f"after {cfg.max_iterations} iterations"
    )


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy needs 0 <= p <= 1, got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: SolverConfig = DEFAULT_QUAD,
    points: list[float] | None = None,
) -> float:
    """Adaptive Gauss-Kronrod quadrature with a hard error contract.

    Raises ConvergenceError when the estimated absolute error exceeds
    ``cfg.abs_tolerance`` within ``cfg.max_iterations`` subintervals.
    """
    if not lo < hi:
        raise DomainError(f"integrate needs lo < hi, got [{lo!r}, {hi!r}]")
    # breakpoints split the interval up front, so they count against the budget
    inner = [p for p in (points or ()) if lo < p < hi] or None
    if inner is not None and len(inner) >= cfg.max_iterations:
        raise ConvergenceError(
            f"{len(inner)} breakpoints leave no room in a budget of {cfg.max_iterations} subintervals"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        value, err = _spi.quad(
            f,
            lo,
            hi,
            epsabs=cfg.abs_tolerance * 0.1,
            epsrel=0.0,
            limit=cfg.max_iterations,
            points=inner,
        )
    if not err <= cfg.abs_tolerance:
        raise ConvergenceError(
            f"quadrature error estimate {err:.3g} exceeds {cfg.abs_tolerance:.3g} on [{lo}, {hi}]"
        )
    return value
