"""Run the blow-up and relay-message inequality checks and print a summary.

The blow-up check covers the exact half-space grid plus Monte Carlo runs on
balls and a union of balls; the inequality check runs the quantizer sweep and
reports the slack in every cell.
"""

import argparse

from relaybounds import concentration as conc
from relaybounds import mi_verify


def blowup(samples, seed):
    grid = conc.exact_grid()
    print(f"half-space grid: {sum(c.holds for c in grid)}/{len(grid)} cells hold")
    cases = [
        ("ball n=20", conc.ConcentrationParams(20, 1.0, 0.15, 0.5), None),
        ("ball n=5", conc.ConcentrationParams(5, 2.0, 0.3, 0.2), None),
        ("two balls n=3", conc.ConcentrationParams(3, 1.0, 1.0, 0.3),
         conc.UnionOfBalls((conc.Ball(1.0, (1.0, 0.0, 0.0)), conc.Ball(1.0, (-1.0, 0.0, 0.0))))),
    ]
    for name, p, s in cases:
        s = s or conc.ball_with_probability(p)
        chk = conc.monte_carlo_check(p, s, samples=samples, seed=seed)
        print(f"{name:14s} blow-up {chk.blowup_prob:.6f} +/- {chk.stderr:.1e} "
              f"floor {chk.floor:.6f} -> {chk.verdict.value}")


def relay_message():
    print(f"{'snr':>8s} {'thr/sqrtP':>9s} {'a':>10s} {'lhs':>12s} {'rhs':>12s} holds")
    for r in mi_verify.sweep_lemma2():
        t = r.relay.threshold / r.relay.power**0.5
        print(f"{r.relay.snr:8.3g} {t:9.2f} {r.a:10.6f} {r.lhs:12.4e} {r.rhs:12.4e} {r.holds}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    blowup(args.samples, args.seed)
    relay_message()


if __name__ == "__main__":
    main()
