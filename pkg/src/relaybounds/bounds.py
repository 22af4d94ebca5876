"""Upper bounds on the capacity of the Gaussian primitive relay channel.

Three bounds are evaluated from the channel SNRs ``snr1 = P/N1`` (relay),
``snr2 = P/N2`` (destination) and the relay-link rate ``r0``:

* the cut-set bound, ``min(C1, C2(0))``;
* the auxiliary-variable bound, which adds ``R <= C3(a)`` and requires one
  ``a`` in ``[0, r0]`` to satisfy every constraint simultaneously;
* the sharpened bound for ``N1 <= N2``, with the two constraints ``C4`` and
  ``C5`` in place of ``C3``.

"There exists some a" is evaluated as ``max_a min_i C_i(a)``.  ``C2`` is
strictly decreasing in ``a`` and the other a-dependent constraints are
strictly increasing, so the optimizer is their crossing clipped to
``[0, r0]``.  Every a-dependent constraint is written as
``C2(0) - K + increment(a)`` where ``K = C2(0) - C3(0)``; the crossing then
depends only on ``K``, which stays finite in most infinite-SNR limits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .numerics import (
    LN2,
    LOG2E,
    DEFAULT_SOLVER,
    DomainError,
    ExtReal,
    IndeterminateLimitError,
    PreconditionError,
    SolverConfig,
    bisect,
    half_log2_1p,
)

# tolerance used to decide which constraint attains the bound
ACTIVE_TOL = 1e-9


class Constraint(enum.Enum):
    BROADCAST = "broadcast"
    MULTIPLE_ACCESS = "multiple_access"
    NEW_CONSTRAINT_7 = "new_constraint_7"
    NEW_CONSTRAINT_26 = "new_constraint_26"
    NEW_CONSTRAINT_27 = "new_constraint_27"


@dataclass(frozen=True)
class ChannelParams:
    snr1: ExtReal
    snr2: ExtReal
    r0: float

    def __post_init__(self):
        object.__setattr__(self, "snr1", ExtReal(self.snr1))
        object.__setattr__(self, "snr2", ExtReal(self.snr2))
        r0 = float(self.r0)
        if not (r0 >= 0.0 and math.isfinite(r0)):
            raise DomainError(f"r0 must be finite and >= 0, got {self.r0!r}")
        object.__setattr__(self, "r0", r0)

    @classmethod
    def symmetric(cls, snr: float | str, r0: float) -> "ChannelParams":
        return cls(snr, snr, r0)

    @property
    def finite(self) -> bool:
        return not (self.snr1.is_inf or self.snr2.is_inf)


@dataclass(frozen=True)
class BoundResult:
    value: float
    active_constraint: Constraint
    a_star: float = 0.0


def sqrt_term(a: float) -> float:
    """sqrt(2 a ln2) * log2(e)."""
    return math.sqrt(2.0 * a * LN2) * LOG2E


def new_increment(a: float) -> float:
    """Growth of the auxiliary constraint above its a = 0 value."""
    return a + sqrt_term(a)


def sharpened_increment(a: float, rho: float) -> float:
    """Growth of the N1/N2-weighted constraint above 0.5*log2(1 + snr1).

    ``rho = N1/N2``.  Written so that ``rho == 1`` reproduces
    ``new_increment`` bit for bit.
    """
    inner = rho * (rho * (2.0 * a * LN2) + (1.0 - rho))
    return rho * a + math.sqrt(max(inner, 0.0)) * LOG2E


def solve_astar(k: float, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Unique a >= 0 with ``2a + sqrt(2a ln2) log2(e) = k``.

    Substituting ``u = sqrt(2a ln2)`` turns the equation into
    ``u^2 + u = k ln2``.
    """
    if not (k >= 0.0 and math.isfinite(k)):
        raise DomainError(f"solve_astar needs finite k >= 0, got {k!r}")
    u = 0.5 * (math.sqrt(1.0 + 4.0 * k * LN2) - 1.0)
    return u * u / (2.0 * LN2)


def solve_astar_bisect(k: float, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    if not (k >= 0.0 and math.isfinite(k)):
        raise DomainError(f"solve_astar needs finite k >= 0, got {k!r}")
    if k == 0.0:
        return 0.0
    return bisect(lambda a: 2.0 * a + sqrt_term(a) - k, 0.0, k, cfg)


def crossing(k: float, r0: float, rho: float | None = None,
             cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Maximizer over [0, r0] of ``min(-a, increment(a) - k)``.

    With ``rho=None`` the increment is ``new_increment``; otherwise it is
    ``min(new_increment, sharpened_increment(., rho))``.
    """
    if k <= 0.0 or r0 == 0.0:
        return 0.0
    if rho is None or rho == 1.0:
        return min(solve_astar(k, cfg), r0)

    def excess(a):
        return k - a - min(new_increment(a), sharpened_increment(a, rho))

    # excess(0) = k > 0 and excess(k) < 0 since both increments are positive
    return min(bisect(excess, 0.0, k, cfg), r0)


def limit_slacks(params: ChannelParams, rho: float | None = None) -> tuple[float, float]:
    """The two log-ratio differences the bounds depend on.

    Returns ``(D, K)`` with ``D = C1 - C2(0)`` and ``K = C2(0) - C3(0)``,
    evaluated through their limits when an SNR is infinite.  ``rho`` is the
    ratio snr2/snr1 and is consulted only when both SNRs are infinite.
    """
    s1, s2, r0 = params.snr1, params.snr2, params.r0
    if params.finite:
        d = half_log2_1p(s1 / (1.0 + s2)) - r0
        k = r0 - half_log2_1p((s1 - s2) / (1.0 + s2)) if s1 > s2 else r0
        return d, k
    if s1.is_inf and s2.is_inf:
        if rho is None:
            raise IndeterminateLimitError("both SNRs infinite: the ratio snr2/snr1 is required")
        if not rho > 0.0:
            raise DomainError(f"rho must be positive, got {rho!r}")
        d = 0.5 * math.log2(1.0 + 1.0 / rho) - r0
        k = r0 + 0.5 * math.log2(min(rho, 1.0))
        return d, k
    if s1.is_inf:
        return math.inf, -math.inf
    # snr2 infinite, snr1 finite
    return -r0, r0


class ConstraintSet:
    """Right-hand sides of all constraints for one channel.

    ``rho`` overrides ``snr2/snr1`` and is only needed when both SNRs are
    infinite.
    """

    def __init__(self, params: ChannelParams, rho: float | None = None):
        self.params = params
        s1, s2 = params.snr1, params.snr2
        if rho is None and params.finite:
            rho = float(s2) / float(s1) if s1 > 0 else 1.0
        elif rho is None and s1.is_inf and not s2.is_inf:
            rho = 0.0
        self.rho = rho
        self._c2_zero = half_log2_1p(s2) + params.r0
        self._c3_zero = half_log2_1p(max(s1, s2))
        self._c4_zero = half_log2_1p(s1)

    @property
    def c1(self) -> float:
        s1, s2 = self.params.snr1, self.params.snr2
        if s1.is_inf or s2.is_inf:
            return math.inf
        return half_log2_1p(s1 + s2)

    def c2_at(self, a: float) -> float:
        return self._c2_zero - a

    def c3_at(self, a: float) -> float:
        return self._c3_zero + new_increment(a)

    def c4_at(self, a: float) -> float:
        return self._c4_zero + new_increment(a)

    def c5_at(self, a: float) -> float:
        if self.rho is None:
            raise IndeterminateLimitError("constraint C5 needs the noise ratio N1/N2")
        return self._c4_zero + sharpened_increment(a, self.rho)


def _pick_active(value: float, candidates) -> Constraint:
    for name, rhs in candidates:
        if rhs == value or abs(rhs - value) <= ACTIVE_TOL:
            return name
    raise AssertionError("no constraint attains the bound")  # pragma: no cover


def cutset_bound(params: ChannelParams) -> BoundResult:
    cs = ConstraintSet(params, rho=1.0)
    broadcast, mac = cs.c1, cs.c2_at(0.0)
    if mac <= broadcast:
        return BoundResult(mac, Constraint.MULTIPLE_ACCESS, 0.0)
    return BoundResult(broadcast, Constraint.BROADCAST, 0.0)


def theorem1_bound(params: ChannelParams, rho: float | None = None,
                   cfg: SolverConfig = DEFAULT_SOLVER) -> BoundResult:
    """Cut-set bound tightened by the auxiliary constraint C3.

    At ``snr1 = snr2 = inf`` the value is infinite and ``a_star`` is taken
    along the ray ``snr2/snr1 = rho`` (default 1).
    """
    if params.snr1.is_inf and params.snr2.is_inf and rho is None:
        rho = 1.0
    _, k = limit_slacks(params, rho)
    a = crossing(k, params.r0, cfg=cfg)
    cs = ConstraintSet(params, rho=rho if rho is not None else 1.0)
    candidates = [
        (Constraint.BROADCAST, cs.c1),
        (Constraint.MULTIPLE_ACCESS, cs.c2_at(a)),
        (Constraint.NEW_CONSTRAINT_7, cs.c3_at(a)),
    ]
    value = min(rhs for _, rhs in candidates)
    return BoundResult(value, _pick_active(value, candidates), a)


def prop5_bound(params: ChannelParams, rho: float | None = None,
                cfg: SolverConfig = DEFAULT_SOLVER) -> BoundResult:
    """Sharpened bound for N1 <= N2 (snr1 >= snr2).

    ``rho = N1/N2 = snr2/snr1`` is derived from the SNRs; it must be given
    explicitly when both SNRs are infinite.
    """
    s1, s2 = params.snr1, params.snr2
    if s1.is_inf and s2.is_inf:
        if rho is None:
            raise IndeterminateLimitError(
                "prop5 at snr1 = snr2 = inf needs the ratio rho = N1/N2"
            )
        if not 0.0 < rho <= 1.0:
            raise PreconditionError(f"prop5 needs 0 < rho <= 1, got {rho!r}")
    else:
        if s1 < s2:
            raise PreconditionError(
                f"prop5 requires snr1 >= snr2 (N1 <= N2), got snr1={s1}, snr2={s2}"
            )
        if s1.is_inf:
            rho = 0.0
        elif s1 == 0.0:
            rho = 1.0
        else:
            rho = float(s2) / float(s1)
    _, k = limit_slacks(params, rho if s1.is_inf and s2.is_inf else None)
    a = crossing(k, params.r0, rho=rho, cfg=cfg)
    cs = ConstraintSet(params, rho=rho)
    candidates = [
        (Constraint.BROADCAST, cs.c1),
        (Constraint.MULTIPLE_ACCESS, cs.c2_at(a)),
        (Constraint.NEW_CONSTRAINT_26, cs.c4_at(a)),
        (Constraint.NEW_CONSTRAINT_27, cs.c5_at(a)),
    ]
    value = min(rhs for _, rhs in candidates)
    return BoundResult(value, _pick_active(value, candidates), a)
