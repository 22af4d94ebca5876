"""Print the headline numbers: the limit gap, the grid supremum for both
tightened bounds, the closed-form crossing at infinity and the network
pre-constant."""

import argparse
import time

from relaybounds.bounds import ChannelParams
from relaybounds.gap import (
    ASTAR_LIMIT,
    GapGrid,
    gap,
    max_gap_search,
    network_gap_lower_bound,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snr-points", type=int, default=GapGrid.snr_points)
    ap.add_argument("--nodes", type=int, nargs="+", default=[1, 4, 10, 100])
    args = ap.parse_args()

    print(f"gap(inf, inf, 0.5)          = {gap(ChannelParams('inf', 'inf', 0.5)).gap:.12f}")
    print(f"closed-form crossing at inf = {ASTAR_LIMIT:.12f}")
    grid = GapGrid(snr_points=args.snr_points)
    for variant in ("theorem1", "prop5"):
        t0 = time.perf_counter()
        sup = max_gap_search(variant, grid)
        s1, s2, r0 = sup.argmax
        print(f"sup gap [{variant:8s}]       = {sup.value:.12f} at ({s1}, {s2}, {r0}), "
              f"rho={sup.argmax_rho}, best finite {sup.max_finite:.12f}, "
              f"{sup.points} points, {time.perf_counter() - t0:.2f} s")
    for n in args.nodes:
        print(f"network gap, {n:4d} nodes    = {network_gap_lower_bound(n):.12f}")


if __name__ == "__main__":
    main()
