"""Single-letter check of the relay-message inequality

    I(X; I) - I(Y; I) <= a + sqrt(2 a ln2) log2(e),   a = H(I | X),

for binary antipodal ``X in {-sqrt(P), +sqrt(P)}``, relay and destination
observations ``Z = X + W1`` and ``Y = X + W2`` with equal noise variance, and
a threshold quantizer ``I = 1{Z > threshold}``.

The discrete terms are exact.  The differential entropies are integrated
numerically on ``[-(sqrt(P) + 8 sqrt(N)), sqrt(P) + 8 sqrt(N)]``.  The left
side is evaluated through the identity ``I(X;I) - I(Y;I) = I(X;I|Y)``
(valid because I - X - Y is Markov), which avoids cancelling two
nearly equal mutual informations at high SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .numerics import (
    DEFAULT_QUAD,
    LN2,
    LOG2E,
    DomainError,
    SolverConfig,
    binary_entropy,
    gaussian_sf,
    integrate,
)

TRUNCATION_SIGMAS = 8.0
HOLD_TOL = 1e-6


@dataclass(frozen=True)
class QuantizerRelay:
    power: float
    noise_var: float
    threshold: float = 0.0

    def __post_init__(self):
        if not self.power > 0:
            raise DomainError(f"power must be positive, got {self.power!r}")
        if not self.noise_var > 0:
            raise DomainError(f"noise_var must be positive, got {self.noise_var!r}")
        if not math.isfinite(self.threshold):
            raise DomainError(f"threshold must be finite, got {self.threshold!r}")

    @property
    def snr(self) -> float:
        return self.power / self.noise_var


@dataclass(frozen=True)
class MIReport:
    relay: QuantizerRelay
    i_xi: float
    i_yi: float
    a: float
    lhs: float
    rhs: float
    holds: bool
    h_y: float
    h_y_given_i: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


class SweepError(RuntimeError):
    def __init__(self, snr: float, threshold: float, cause: Exception):
        super().__init__(f"evaluation failed at snr={snr!r}, threshold={threshold!r}: {cause}")
        self.snr = snr
        self.threshold = threshold
        self.cause = cause


def inequality_rhs(a: float) -> float:
    return a + math.sqrt(2.0 * a * LN2) * LOG2E


def _neg_plogp(f: float) -> float:
    return -f * math.log2(f) if f > 0.0 else 0.0


def evaluate_quantizer_relay(q: QuantizerRelay, cfg: SolverConfig = DEFAULT_QUAD) -> MIReport:
    sp, sd = math.sqrt(q.power), math.sqrt(q.noise_var)
    # Pr(I = 1 | X = +sqrt(P)) and Pr(I = 1 | X = -sqrt(P))
    p_plus = gaussian_sf((q.threshold - sp) / sd)
    p_minus = gaussian_sf((q.threshold + sp) / sd)
    p_one = 0.5 * (p_plus + p_minus)
    a = 0.5 * (binary_entropy(p_plus) + binary_entropy(p_minus))
    i_xi = max(binary_entropy(p_one) - a, 0.0)

    norm = 1.0 / (sd * math.sqrt(2.0 * math.pi))

    def phi(u):
        return norm * math.exp(-0.5 * (u / sd) ** 2)

    def f_y(y):
        return 0.5 * (phi(y - sp) + phi(y + sp))

    # joint density f(y, I = i) = sum_x p(x) p(i|x) phi(y - x)
    def f_y_one(y):
        return 0.5 * (p_plus * phi(y - sp) + p_minus * phi(y + sp))

    def f_y_zero(y):
        return 0.5 * ((1.0 - p_plus) * phi(y - sp) + (1.0 - p_minus) * phi(y + sp))

    lim = sp + TRUNCATION_SIGMAS * sd
    brk = [-sp, 0.0, sp]
    h_y = integrate(lambda y: _neg_plogp(f_y(y)), -lim, lim, cfg, points=brk)

    h_y_given_i = 0.0
    for p_i, joint in ((p_one, f_y_one), (1.0 - p_one, f_y_zero)):
        if p_i > 0.0:
            h_y_given_i += p_i * integrate(
                lambda y: _neg_plogp(joint(y) / p_i), -lim, lim, cfg, points=brk
            )
    i_yi = h_y - h_y_given_i

    def cond_mi(y):
        # I(X; I | Y = y) = H(I | Y = y) - H(I | X, Y = y)
        up, down = phi(y - sp), phi(y + sp)
        tot = up + down
        if tot == 0.0:
            return 0.0
        w = up / tot
        mixed = w * p_plus + (1.0 - w) * p_minus
        given_x = w * binary_entropy(p_plus) + (1.0 - w) * binary_entropy(p_minus)
        return f_y(y) * max(binary_entropy(min(max(mixed, 0.0), 1.0)) - given_x, 0.0)

    lhs = integrate(cond_mi, -lim, lim, cfg, points=brk)
    rhs = inequality_rhs(a)
    return MIReport(
        relay=q,
        i_xi=i_xi,
        i_yi=i_yi,
        a=a,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + HOLD_TOL,
        h_y=h_y,
        h_y_given_i=h_y_given_i,
    )


DEFAULT_SNRS = (1e-2, 1e-1, 1.0, 10.0, 100.0)
DEFAULT_THRESHOLDS = (0.0, 0.5, -0.5)


def sweep_lemma2(
    snr_grid: Sequence[float] = DEFAULT_SNRS,
    threshold_grid: Sequence[float] = DEFAULT_THRESHOLDS,
    noise_var: float = 1.0,
    cfg: SolverConfig = DEFAULT_QUAD,
) -> list[MIReport]:
    """One report per (snr, threshold) cell.

    ``threshold_grid`` is in units of ``sqrt(P)``: a value of 0.5 puts the
    quantizer cut at ``0.5 * sqrt(P)``.  The power is ``snr * noise_var``.
    """
    if len(snr_grid) == 0 or len(threshold_grid) == 0:
        raise DomainError("snr_grid and threshold_grid must be nonempty")
    out = []
    for snr in snr_grid:
        for t in threshold_grid:
            try:
                if not snr > 0:
                    raise DomainError(f"snr must be positive, got {snr!r}")
                power = snr * noise_var
                q = QuantizerRelay(power, noise_var, t * math.sqrt(power))
                out.append(evaluate_quantizer_relay(q, cfg))
            except Exception as exc:
                raise SweepError(snr, t, exc) from exc
    return out
