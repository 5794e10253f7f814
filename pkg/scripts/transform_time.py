"""Simulated transformation time and displacement for both planners, n = 3..25.

    python3 scripts/transform_time.py [--out results/]
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from swarmform.experiments import sweep_transform_time
from swarmform.sim import Planner


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--r", type=float, default=1.0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    ns = range(3, 26)
    rows = {m: sweep_transform_time(m, ns, args.r) for m in Planner}
    with open(args.out / "transform_time.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n"] + [f"{m.value}_{k}" for m in Planner
                            for k in ("time", "collisions", "max_disp")])
        for i, n in enumerate(ns):
            w.writerow([n] + [v for m in Planner for v in (rows[m][i].transform_time,
                                                            rows[m][i].collisions,
                                                            repr(rows[m][i].max_displacement))])
    print(f"{'n':>3} | {'macro t':>8} {'coll':>5} | {'moebius t':>9} {'coll':>5} {'max disp':>9}")
    for a, b in zip(rows[Planner.MACRO], rows[Planner.MOEBIUS]):
        print(f"{a.n:>3} | {a.transform_time:>8.2f} {a.collisions:>5d} | "
              f"{b.transform_time:>9.2f} {b.collisions:>5d} {b.max_displacement:>9.4f}")
    for m in Planner:
        print(f"mean {m.value} time: {np.mean([r.transform_time for r in rows[m]]):.3f} s")


if __name__ == "__main__":
    main()
