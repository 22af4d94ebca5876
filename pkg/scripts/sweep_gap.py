"""Tabulate the theorem1 gap on an SNR x r0 grid (CSV on stdout).

Useful for plotting how the gap approaches its limit along the symmetric
diagonal and how it collapses once the broadcast constraint takes over.
"""

import argparse
import csv
import sys

import numpy as np

from relaybounds.bounds import ChannelParams
from relaybounds.gap import gap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snr-min", type=float, default=1e-1)
    ap.add_argument("--snr-max", type=float, default=1e6)
    ap.add_argument("--snr-points", type=int, default=15)
    ap.add_argument("--r0-max", type=float, default=1.0)
    ap.add_argument("--r0-points", type=int, default=21)
    ap.add_argument("--ratio", type=float, default=1.0, help="snr2 = ratio * snr1")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["snr1", "snr2", "r0", "gap"])
    for s in np.geomspace(args.snr_min, args.snr_max, args.snr_points):
        for r0 in np.linspace(0.0, args.r0_max, args.r0_points):
            p = ChannelParams(float(s), float(s) * args.ratio, float(r0))
            w.writerow([f"{p.snr1:.6g}", f"{p.snr2:.6g}", f"{r0:.6g}", f"{gap(p).gap:.12g}"])
    for r0 in np.linspace(0.0, args.r0_max, args.r0_points):
        w.writerow(["inf", "inf", f"{r0:.6g}", f"{gap(ChannelParams('inf', 'inf', float(r0))).gap:.12g}"])


if __name__ == "__main__":
    main()
