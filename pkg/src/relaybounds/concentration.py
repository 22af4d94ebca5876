"""Gaussian blow-up checks.

For ``U ~ N(0, noise_var I_n)`` and a set ``A`` with ``Pr(U in A) >= 2^(-n a_n)``,
the claim under test is

    Pr(U within distance sqrt(n) (sqrt(2 noise_var a_n ln2) + r) of A)
        >= 1 - 2^(-n r^2 / (2 noise_var)).

Half-spaces and balls have closed-form blow-up probabilities, so the claim
can be checked exactly for them.  Other sets go through Monte Carlo with a
three-standard-error guard band.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special, stats

from .numerics import LN2, DomainError, PreconditionError, gaussian_cdf_inv

# n * a_n above this makes 2^(-n a_n) too small to work with
MAX_EXPONENT_BITS = 1000.0
MC_BLOCK = 20_000


class Method(str, enum.Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ConcentrationParams:
    n: int
    noise_var: float
    a_n: float
    r: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not self.noise_var > 0:
            raise DomainError(f"noise_var must be positive, got {self.noise_var!r}")
        if not self.a_n >= 0:
            raise DomainError(f"a_n must be >= 0, got {self.a_n!r}")
        if not self.r > 0:
            raise DomainError(f"r must be positive, got {self.r!r}")
        if self.n * self.a_n > MAX_EXPONENT_BITS:
            raise DomainError(
                f"2^(-n a_n) underflows: n*a_n = {self.n * self.a_n:g} > {MAX_EXPONENT_BITS:g}"
            )

    @property
    def min_base_prob(self) -> float:
        return 2.0 ** (-self.n * self.a_n)

    @property
    def radius(self) -> float:
        return math.sqrt(self.n) * (math.sqrt(2.0 * self.noise_var * self.a_n * LN2) + self.r)

    @property
    def floor_exponent_bits(self) -> float:
        """k such that the floor is 1 - 2^-k."""
        return self.n * self.r**2 / (2.0 * self.noise_var)

    @property
    def floor(self) -> float:
        return -math.expm1(-self.floor_exponent_bits * LN2)


@dataclass(frozen=True)
class Halfspace:
    """{w : w[axis] <= threshold}."""

    threshold: float
    axis: int = 0

    def distance(self, w: np.ndarray) -> np.ndarray:
        return np.maximum(w[..., self.axis] - self.threshold, 0.0)

    def scaled(self, factor: float) -> "Halfspace":
        return Halfspace(self.threshold * factor, self.axis)


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball; ``center=None`` means the origin."""

    radius: float
    center: tuple[float, ...] | None = None

    def _center(self, n: int) -> np.ndarray:
        if self.center is None:
            return np.zeros(n)
        c = np.asarray(self.center, dtype=float)
        if c.shape != (n,):
            raise DomainError(f"ball center has dimension {c.size}, expected {n}")
        return c

    def distance(self, w: np.ndarray) -> np.ndarray:
        c = self._center(w.shape[-1])
        return np.maximum(np.linalg.norm(w - c, axis=-1) - self.radius, 0.0)

    def scaled(self, factor: float) -> "Ball":
        center = None if self.center is None else tuple(factor * x for x in self.center)
        return Ball(self.radius * factor, center)


@dataclass(frozen=True)
class UnionOfBalls:
    balls: tuple[Ball, ...]

    def distance(self, w: np.ndarray) -> np.ndarray:
        return np.min(np.stack([b.distance(w) for b in self.balls]), axis=0)

    def scaled(self, factor: float) -> "UnionOfBalls":
        return UnionOfBalls(tuple(b.scaled(factor) for b in self.balls))


SetDescriptor = Halfspace | Ball | UnionOfBalls


@dataclass(frozen=True)
class ConcentrationCheck:
    params: ConcentrationParams
    set: SetDescriptor
    base_prob: float
    blowup_prob: float
    floor: float
    holds: bool
    method: Method
    verdict: Verdict
    stderr: float = 0.0
    base_stderr: float = 0.0
    samples: int = 0
    seed: int | None = None


def _log_probs(params: ConcentrationParams, s: SetDescriptor):
    """Exact (log base prob, log prob of the complement of the blow-up).

    Returns None when the set has no closed form here.
    """
    n, var = params.n, params.noise_var
    sd = math.sqrt(var)
    t = params.radius
    if isinstance(s, Halfspace):
        if not 0 <= s.axis < n:
            raise DomainError(f"halfspace axis {s.axis} outside dimension {n}")
        z = s.threshold / sd
        return float(special.log_ndtr(z)), float(special.log_ndtr(-(z + t / sd)))
    if isinstance(s, Ball):
        c = s._center(n)
        nc = float(c @ c) / var
        if nc == 0.0:
            dist = stats.chi2(n)
        else:
            dist = stats.ncx2(n, nc)
        return (
            float(dist.logcdf(s.radius**2 / var)),
            float(dist.logsf((s.radius + t) ** 2 / var)),
        )
    return None


def exact_check(params: ConcentrationParams, s: SetDescriptor) -> ConcentrationCheck:
    """Closed-form check for a half-space or a ball.

    Raises PreconditionError when ``Pr(A) < 2^(-n a_n)``.  The comparison
    against the floor is done on the log of the complements so that it stays
    meaningful when both probabilities round to 1.
    """
    logs = _log_probs(params, s)
    if logs is None:
        raise DomainError(f"no closed form for {type(s).__name__}; use monte_carlo_check")
    log_base, log_miss = logs
    log_min_base = -params.n * params.a_n * LN2
    if log_base < log_min_base - 1e-12 * max(1.0, abs(log_min_base)):
        raise PreconditionError(
            f"Pr(A) = {math.exp(log_base):.6g} is below 2^(-n a_n) = {params.min_base_prob:.6g}"
        )
    holds = log_miss <= -params.floor_exponent_bits * LN2
    return ConcentrationCheck(
        params=params,
        set=s,
        base_prob=math.exp(log_base),
        blowup_prob=-math.expm1(log_miss),
        floor=params.floor,
        holds=holds,
        method=Method.EXACT,
        verdict=Verdict.PASS if holds else Verdict.FAIL,
    )


def extremal_halfspace(params: ConcentrationParams) -> Halfspace:
    """Half-space with probability exactly 2^(-n a_n) (a.k.a. threshold +inf at a_n = 0)."""
    p = params.min_base_prob
    if p >= 1.0:
        return Halfspace(math.inf)
    return Halfspace(math.sqrt(params.noise_var) * gaussian_cdf_inv(p))


def ball_with_probability(params: ConcentrationParams, prob: float | None = None) -> Ball:
    """Origin-centred ball with ``Pr(U in ball) = prob`` (default 2^(-n a_n))."""
    p = params.min_base_prob if prob is None else prob
    if p >= 1.0:
        return Ball(math.inf)
    return Ball(math.sqrt(params.noise_var * stats.chi2(params.n).ppf(p)))


def halfspace_check(params: ConcentrationParams) -> ConcentrationCheck:
    return exact_check(params, extremal_halfspace(params))


def mc_verdict(estimate: float, stderr: float, floor: float) -> Verdict:
    """PASS only if the whole 3-sigma band clears the floor, FAIL only if it
    lies entirely below, INCONCLUSIVE otherwise."""
    if estimate - 3.0 * stderr >= floor:
        return Verdict.PASS
    if estimate + 3.0 * stderr < floor:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


def monte_carlo_check(
    params: ConcentrationParams,
    s: SetDescriptor,
    samples: int = 100_000,
    seed: int = 0,
) -> ConcentrationCheck:
    """Estimate the blow-up probability of ``s`` from i.i.d. Gaussian draws.

    Samples are drawn in blocks, each from its own child of
    ``SeedSequence(seed)``, so the estimate depends only on ``seed`` and
    ``samples``.  The base probability is exact when a closed form exists
    and estimated otherwise.
    """
    if samples < 1000:
        raise DomainError(f"samples must be >= 1000, got {samples}")
    n, sd, t = params.n, math.sqrt(params.noise_var), params.radius

    n_blocks = -(-samples // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    inside = hit = 0
    remaining = samples
    for child in children:
        m = min(MC_BLOCK, remaining)
        remaining -= m
        w = np.random.default_rng(child).standard_normal((m, n)) * sd
        dist = s.distance(w)
        inside += int(np.count_nonzero(dist <= 0.0))
        hit += int(np.count_nonzero(dist <= t))

    logs = _log_probs(params, s)
    if logs is not None:
        base, base_se = math.exp(logs[0]), 0.0
    else:
        base = inside / samples
        base_se = math.sqrt(base * (1.0 - base) / samples)
    if base + 3.0 * base_se < params.min_base_prob * (1.0 - 1e-12):
        raise PreconditionError(
            f"Pr(A) = {base:.6g} (+/- {base_se:.2g}) is below 2^(-n a_n) = "
            f"{params.min_base_prob:.6g}; the claim does not apply"
        )

    p = hit / samples
    se = math.sqrt(p * (1.0 - p) / samples)
    floor = params.floor
    verdict = mc_verdict(p, se, floor)
    return ConcentrationCheck(
        params=params,
        set=s,
        base_prob=base,
        blowup_prob=p,
        floor=floor,
        holds=verdict is Verdict.PASS,
        method=Method.MONTE_CARLO,
        verdict=verdict,
        stderr=se,
        base_stderr=base_se,
        samples=samples,
        seed=seed,
    )


def exact_grid(
    ns: Sequence[int] = (1, 10, 100, 1000),
    noise_vars: Sequence[float] = (0.25, 1.0, 4.0, 16.0),
    a_ns: Sequence[float] = (0.0, 0.05, 0.1, 0.5, 1.0),
    rs: Sequence[float] = (0.1, 0.3, 1.0, 3.0),
) -> list[ConcentrationCheck]:
    """halfspace_check over a parameter grid, skipping underflow cells."""
    out = []
    for n in ns:
        for var in noise_vars:
            for a in a_ns:
                if n * a > MAX_EXPONENT_BITS:
                    continue
                for r in rs:
                    out.append(halfspace_check(ConcentrationParams(n, var, a, r)))
    return out
