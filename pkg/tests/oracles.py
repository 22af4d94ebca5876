"""Independent reference computations used by the test suite.

Nothing here calls into the package's solvers: the max-min values come from
evaluating the constraints on a dense numpy grid over ``a``.
"""

import math

import numpy as np

LOG2E = 1.0 / math.log(2.0)


def _hl(x):
    return 0.5 * math.log2(1.0 + x)


def grid_maxmin(snr1, snr2, r0, variant="theorem1", points=10**6 + 1):
    """Dense-grid ``min(C1, max_a min(C2(a), C3(a)))`` (or C4/C5 for prop5).

    Above ``a = K = C2(0) - C3(0)`` the decreasing constraint already sits
    below the value of every increasing one at ``a = 0``, so the max-min lies
    in ``[0, min(r0, K)]`` and only that interval is gridded.  When ``K <= 0``
    the maximizer is ``a = 0``, which is always a grid point.
    """
    c1 = _hl(snr1 + snr2)
    c2_0 = _hl(snr2) + r0
    c3_0 = _hl(max(snr1, snr2))
    k = c2_0 - c3_0
    hi = min(r0, k) if k > 0 else r0
    a = np.linspace(0.0, hi, points)
    c2 = c2_0 - a
    root = np.sqrt(2.0 * a * math.log(2.0)) * LOG2E
    if variant == "theorem1":
        inc = c3_0 + a + root
    elif variant == "prop5":
        rho = snr2 / snr1
        c4 = _hl(snr1) + a + root
        c5 = _hl(snr1) + rho * a + np.sqrt(rho * (rho * 2.0 * a * math.log(2.0) + 1.0 - rho)) * LOG2E
        inc = np.minimum(c4, c5)
    else:
        raise ValueError(variant)
    inner = float(np.max(np.minimum(c2, inc)))
    return min(c1, inner)


def grid_spacing(snr1, snr2, r0, points=10**6 + 1):
    """Spacing of the ``grid_maxmin`` grid.

    C2 falls with slope exactly 1, so the grid max is below the true max-min
    by less than one spacing.
    """
    k = _hl(snr2) + r0 - _hl(max(snr1, snr2))
    hi = min(r0, k) if k > 0 else r0
    return hi / (points - 1)
