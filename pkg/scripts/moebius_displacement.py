"""Per-agent displacement of the circle-to-line plan versus n, with the candidate pole gaps.

For each n the script lists the max displacement for the default gap choice
and the best achievable over every gap, which shows the odd/even alternation.

    python3 scripts/moebius_displacement.py [--nmax 25]
"""

import argparse
import math

import numpy as np

from swarmform.experiments import plan_outcome
from swarmform.pattern import formation
from swarmform.sim import Planner


def best_over_gaps(n):
    phis = 2 * math.pi * np.arange(n) / n
    best = math.inf
    for k in range(n):
        beta = math.pi - (phis[k] + math.pi / n)
        x = np.tan((phis + beta) / 2)
        x = x * 2.0 / np.ptp(x)
        for sign in (1, -1):
            best = min(best, float(np.hypot(sign * x - np.cos(phis), np.sin(phis)).max()))
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=25)
    args = ap.parse_args()
    print(f"{'n':>3} {'default':>9} {'best gap':>9}")
    for n in range(3, args.nmax + 1):
        p = formation(n)
        final, _ = plan_outcome(p, Planner.MOEBIUS)
        d = float(np.max(np.linalg.norm(final.by_id() - p.by_id(), axis=1)))
        print(f"{n:>3} {d:>9.4f} {best_over_gaps(n):>9.4f}")


if __name__ == "__main__":
    main()
