"""Gap between the cut-set bound and the tightened bounds.

At finite SNR the gap is a plain difference of two bound values.  When an
SNR is infinite both bounds are infinite, and the gap is evaluated from the
finite slacks ``D = C1 - C2(0)`` and ``K = C2(0) - C3(0)``: relative to
``C2(0)`` the cut-set bound sits at ``min(D, 0)`` and the tightened bound at
``min(D, -a*)``, where ``a*`` is the crossing for ``K``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .bounds import ChannelParams
from .numerics import (
    DEFAULT_SOLVER,
    LN2,
    LOG2E,
    DomainError,
    ExtReal,
    INF,
    IndeterminateLimitError,
    SolverConfig,
    bisect,
)


class Variant(str, enum.Enum):
    THEOREM1 = "theorem1"
    PROP5 = "prop5"


@dataclass(frozen=True)
class GapReport:
    params: ChannelParams
    cutset: float
    improved: float
    gap: float
    variant: Variant
    rho: float | None = None


@dataclass(frozen=True)
class GapSupremum:
    value: float
    argmax: tuple[ExtReal, ExtReal, float]
    argmax_rho: float | None
    max_finite: float
    diagonal_monotone: bool
    activity_verified: bool
    points: int


def _improved(params, variant, rho, cfg):
    if variant is Variant.THEOREM1:
        return bounds.theorem1_bound(params, rho=rho, cfg=cfg)
    return bounds.prop5_bound(params, rho=rho, cfg=cfg)


def gap(params: ChannelParams, variant: Variant | str = Variant.THEOREM1,
        rho: float | None = None, cfg: SolverConfig = DEFAULT_SOLVER) -> GapReport:
    """Cut-set bound minus the selected tightened bound.

    ``rho = snr2/snr1`` picks the ray along which ``snr1 = snr2 = inf`` is
    approached.  It defaults to the symmetric ray for ``theorem1`` and is
    mandatory for ``prop5``.
    """
    variant = Variant(variant)
    both_inf = params.snr1.is_inf and params.snr2.is_inf
    if both_inf and rho is None:
        if variant is Variant.PROP5:
            raise IndeterminateLimitError(
                "gap(prop5) at snr1 = snr2 = inf needs the ratio rho = N1/N2"
            )
        rho = 1.0
    cut = bounds.cutset_bound(params).value
    improved = _improved(params, variant, rho, cfg).value
    if math.isfinite(cut) and math.isfinite(improved):
        return GapReport(params, cut, improved, cut - improved, variant, rho)
    d, k = bounds.limit_slacks(params, rho)
    if variant is Variant.PROP5:
        if both_inf:
            prho = rho
        else:
            prho = 0.0 if params.snr1.is_inf else float(params.snr2) / float(params.snr1)
        a = bounds.crossing(k, params.r0, rho=prho, cfg=cfg)
    else:
        a = bounds.crossing(k, params.r0, cfg=cfg)
    return GapReport(params, cut, improved, min(d, 0.0) - min(d, -a), variant, rho)


def network_gap_lower_bound(num_nodes: int) -> float:
    """Per-network gap floor ``(Delta*/4) * num_nodes``.

    The primitive relay channel counts as a four-antenna network, so its
    largest gap ``Delta* = gap(inf, inf, 0.5)`` spreads over four nodes.
    """
    if int(num_nodes) != num_nodes or num_nodes < 1:
        raise DomainError(f"num_nodes must be a positive integer, got {num_nodes!r}")
    delta_star = gap(ChannelParams(INF, INF, 0.5)).gap
    return delta_star / 4.0 * int(num_nodes)


# -- closed form for the sharpened bound's crossing at the activity boundary --


def boundary_residual(a: float, x1: float, x2: float) -> float:
    """``(q + 1) a + sqrt(q (2 q a ln2 + 1 - q)) log2(e) - dC`` with q = x2/x1.

    ``dC = 0.5 log2(1 + x1 + x2) - 0.5 log2(1 + x1)`` is the largest slack
    that keeps the multiple-access constraint active.
    """
    q = x2 / x1
    dc = 0.5 * math.log1p(x2 / (1.0 + x1)) / LN2
    inner = q * (q * (2.0 * a * LN2) + (1.0 - q))
    return (q + 1.0) * a + math.sqrt(max(inner, 0.0)) * LOG2E - dc


def _check_ratio(x1, x2):
    x1, x2 = ExtReal(x1), ExtReal(x2)
    if x2 > x1:
        raise DomainError(f"need x1 >= x2 (N1 <= N2), got x1={x1}, x2={x2}")
    if x2 == 0.0:
        raise DomainError("need x2 > 0")
    return x1, x2


ASTAR_LIMIT = (LN2 + 1.0 - math.sqrt(2.0 * LN2 + 1.0)) / (4.0 * LN2)


def appendix_c_astar(x1: float, x2: float) -> float:
    """Root of ``boundary_residual`` in closed form.

    Squaring the equation with ``q = x2/x1`` and ``L = ln(1 + x2/(1 + x1))``
    gives ``(q+1)^2 b^2 - ((q+1) L + 2 q^2) b + L^2/4 + q (q - 1) = 0`` in
    ``b = a ln2``; the smaller root is the one that satisfies the unsquared
    equation.  The root is negative when the square-root term alone already
    exceeds ``dC`` (then the sharpened constraint cannot bind there).
    """
    x1, x2 = _check_ratio(x1, x2)
    if x1.is_inf and x2.is_inf:
        return ASTAR_LIMIT
    q = float(x2) / float(x1)
    log_ratio = math.log1p(float(x2) / (1.0 + float(x1)))
    lin = (q + 1.0) * log_ratio + 2.0 * q * q
    disc = lin * lin - (q + 1.0) ** 2 * (log_ratio**2 + 4.0 * q * (q - 1.0))
    return (lin - math.sqrt(disc)) / (2.0 * (q + 1.0) ** 2 * LN2)


def appendix_c_astar_quarter_term(x1: float, x2: float) -> float:
    """The closed form with ``q (q - 1)`` in place of ``4 q (q - 1)``.

    Kept for comparison: it agrees with ``appendix_c_astar`` only on the
    diagonal ``x1 == x2``.
    """
    x1, x2 = _check_ratio(x1, x2)
    if x1.is_inf and x2.is_inf:
        return ASTAR_LIMIT
    q = float(x2) / float(x1)
    log_ratio = math.log1p(float(x2) / (1.0 + float(x1)))
    lin = (q + 1.0) * log_ratio + 2.0 * q * q
    disc = lin * lin - (q + 1.0) ** 2 * (log_ratio**2 + q * (q - 1.0))
    return (lin - math.sqrt(disc)) / (2.0 * (q + 1.0) ** 2 * LN2)


def appendix_c_astar_bisect(x1: float, x2: float,
                            cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Root of ``boundary_residual`` by bisection over its whole domain."""
    x1, x2 = _check_ratio(x1, x2)
    if x1.is_inf or x2.is_inf:
        raise DomainError("bisection route needs finite x1, x2")
    q = float(x2) / float(x1)
    x1, x2 = float(x1), float(x2)
    # the square root is defined for a >= lo; the residual is increasing
    lo = -(1.0 - q) / (2.0 * q * LN2) if q < 1.0 else 0.0
    dc = 0.5 * math.log1p(x2 / (1.0 + x1)) / LN2
    hi = dc / (q + 1.0)
    return bisect(lambda a: boundary_residual(a, x1, x2), lo, hi, cfg)


# -- supremum search ----------------------------------------------------------


@dataclass(frozen=True)
class GapGrid:
    snr_min: float = 1e-2
    snr_max: float = 1e6
    snr_points: int = 25
    r0_max: float = 1.0
    r0_coarse: int = 100  # r0 = i / r0_coarse * r0_max
    r0_fine_center: float = 0.5
    r0_fine_halfwidth: float = 0.05
    r0_fine_step: float = 1e-3
    include_limit: bool = True
    limit_rhos: tuple[float, ...] = (1.0, 0.9, 0.75, 0.5, 0.25)

    def snr_values(self) -> list[float]:
        return [float(x) for x in np.geomspace(self.snr_min, self.snr_max, self.snr_points)]

    def r0_values(self) -> list[float]:
        vals = {round(i * self.r0_max / self.r0_coarse, 12) for i in range(self.r0_coarse + 1)}
        n_fine = int(round(self.r0_fine_halfwidth / self.r0_fine_step))
        for i in range(-n_fine, n_fine + 1):
            r = round(self.r0_fine_center + i * self.r0_fine_step, 12)
            if 0.0 <= r <= self.r0_max:
                vals.add(r)
        return sorted(vals)


DEFAULT_GRID = GapGrid()


def max_gap_search(variant: Variant | str = Variant.THEOREM1,
                   grid: GapGrid = DEFAULT_GRID) -> GapSupremum:
    """Largest gap over a finite SNR x r0 grid plus the point snr1 = snr2 = inf.

    The infinite point is evaluated first so that a finite point must be
    strictly larger to displace it.  ``diagonal_monotone`` reports whether
    the gap is nondecreasing in SNR along snr1 = snr2 at the argmax r0 (and
    bounded by the limit value when the argmax is the limit point).
    ``activity_verified`` reports whether the multiple-access constraint of
    the cut-set bound and C2 of the tightened bound are the active ones at
    the argmax.
    """
    variant = Variant(variant)
    snrs = grid.snr_values()
    r0s = grid.r0_values()
    best = -math.inf
    best_arg = None
    best_rho = None
    count = 0

    if grid.include_limit:
        rhos = grid.limit_rhos if variant is Variant.PROP5 else (1.0,)
        for rho in rhos:
            for r0 in r0s:
                g = gap(ChannelParams(INF, INF, r0), variant, rho=rho).gap
                count += 1
                if g > best:
                    best, best_arg, best_rho = g, (INF, INF, r0), rho

    max_finite = -math.inf
    finite_arg = None
    for s1 in snrs:
        for s2 in snrs:
            if variant is Variant.PROP5 and s1 < s2:
                continue
            for r0 in r0s:
                g = gap(ChannelParams(s1, s2, r0), variant).gap
                count += 1
                if g > max_finite:
                    max_finite, finite_arg = g, (ExtReal(s1), ExtReal(s2), r0)
    if max_finite > best:
        best, best_arg, best_rho = max_finite, finite_arg, None

    r0_star = best_arg[2]
    diag = [gap(ChannelParams(s, s, r0_star), variant).gap for s in snrs]
    monotone = all(b >= a - 1e-12 for a, b in zip(diag, diag[1:]))
    if best_arg[0].is_inf:
        monotone = monotone and diag[-1] <= best + 1e-12

    d, k = bounds.limit_slacks(ChannelParams(*best_arg), best_rho)
    if variant is Variant.PROP5:
        prho = best_rho if best_rho is not None else float(best_arg[1]) / float(best_arg[0])
        a = bounds.crossing(k, r0_star, rho=prho)
    else:
        a = bounds.crossing(k, r0_star)
    activity = d >= 0.0 and -a <= d and best > 0.0

    return GapSupremum(
        value=best,
        argmax=best_arg,
        argmax_rho=best_rho,
        max_finite=max_finite,
        diagonal_monotone=monotone,
        activity_verified=activity,
        points=count,
    )
