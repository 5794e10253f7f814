"""Collision counts of the flatten plan for pre-rotation angles 15..60 deg and n = 3..6.

Also sweeps the agent radius to show how strongly the nonzero cells depend on it.

    python3 scripts/table_collisions.py [--out results/]
"""

import argparse
import json
import math
from pathlib import Path

from swarmform.experiments import TABLE_ANGLES_DEG, TABLE_NS, sweep_rotation_collisions


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--radii", type=float, nargs="+", default=[0.05, 0.075, 0.1])
    args = ap.parse_args()

    angles = [math.radians(a) for a in TABLE_ANGLES_DEG]
    report = {}
    for radius in args.radii:
        table = sweep_rotation_collisions(angles, TABLE_NS, agent_radius=radius)
        report[str(radius)] = {str(n): list(row.values()) for n, row in table.items()}
        print(f"agent_radius = {radius}")
        print("  n  " + "".join(f"{a:>6g}" for a in TABLE_ANGLES_DEG))
        for n, row in table.items():
            print(f"  {n:<3d}" + "".join(f"{c:>6d}" for c in row.values()))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "table_collisions.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
