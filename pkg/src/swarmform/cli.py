"""Command line harness.

    swarmform form            run a tunnel/funnel formation scenario
    swarmform transform       run one transformation method on one n
    swarmform sweep-collisions  rotation angle vs collisions table
    swarmform sweep-time      transformation time over a range of n
    swarmform render          trace CSV -> SVG frames

Exit codes: 0 success, 1 invalid configuration, 2 numeric divergence.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import macro, moebius
from .classify import alignment_residual, classify
from .errors import ConfigError, InvalidArgument, NumericDivergence
from .experiments import (TABLE_ANGLES_DEG, TABLE_NS, plan_outcome, run_transform,
                          sweep_rotation_collisions, sweep_transform_time)
from .pattern import PatternState, formation
from .scenarios import funnel_scenario, load_scenario, tunnel_scenario
from .sim import Planner, SimConfig, make_world, run
from .traceio import OutputError, emit_summary, emit_svg_frames, emit_trace, read_trace


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="scenario file (TOML)")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--method", choices=[m.value for m in Planner], default=None)
    p.add_argument("--variant", choices=[v.value for v in moebius.Variant], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--angle", type=float, default=None, help="rotation offset in degrees")


def build_parser():
    ap = argparse.ArgumentParser(prog="swarmform", description=__doc__.split("\n\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("form", help="run a formation scenario")
    _common(p)
    p.add_argument("--scenario", choices=["tunnel", "funnel"], default="tunnel")
    p.add_argument("--frames", type=int, default=0, help="write an SVG every N ticks (0: none)")

    p = sub.add_parser("transform", help="run one method on one n")
    _common(p)
    p.add_argument("--r", type=float, default=1.0)

    p = sub.add_parser("sweep-collisions", help="rotation angle vs collisions")
    _common(p)
    p.add_argument("--angles", type=float, nargs="+", default=list(TABLE_ANGLES_DEG))
    p.add_argument("--ns", type=int, nargs="+", default=list(TABLE_NS))
    p.add_argument("--agent-radius", type=float, default=0.075)

    p = sub.add_parser("sweep-time", help="transformation time vs n")
    _common(p)
    p.add_argument("--ns", type=int, nargs="+", default=list(range(3, 26)))
    p.add_argument("--r", type=float, default=1.0)

    p = sub.add_parser("render", help="trace CSV to SVG frames")
    _common(p)
    p.add_argument("trace", type=Path)
    p.add_argument("--every", type=int, default=50)
    p.add_argument("--agent-radius", type=float, default=0.075)
    return ap


def _scenario(args):
    if args.config is not None:
        sc = load_scenario(args.config)
    else:
        n = args.n or 5
        planner = Planner(args.method or "macro")
        sc = (tunnel_scenario if args.scenario == "tunnel" else funnel_scenario)(n, planner)
    if args.config is not None and args.n is not None:
        sc = replace(sc, primitives=replace(sc.primitives, n=args.n))
    if args.config is not None and args.method is not None:
        sc = replace(sc, planner=Planner(args.method))
    if args.variant is not None:
        sc = replace(sc, moebius_cfg=replace(sc.moebius_cfg, variant=moebius.Variant(args.variant)))
    if args.angle is not None:
        sc = replace(sc, macro_cfg=replace(sc.macro_cfg, angle_offset=math.radians(args.angle)))
    return sc


def cmd_form(args):
    sc = _scenario(args)
    w0 = sc.world()
    res = run(w0, sc.max_ticks)
    out = args.out
    emit_trace(res.records, out / "trace.csv")
    start = PatternState(w0.agents.position)
    end = PatternState(res.world.agents.position)
    summary = {
        "scenario": sc.name,
        "n": sc.primitives.n,
        "method": sc.planner.value,
        "ticks": res.world.tick,
        "transitions": [[t, a.value, b.value] for t, a, b in res.transitions],
        "final_centroid": [float(v) for v in res.world.centroid_position],
        "course_exit_x": sc.course.exit_x,
        "restored_residual": alignment_residual(start, end),
    }
    emit_summary(summary, out / "summary.json")
    if args.frames:
        segs = [ob.segment for ob in sc.course.obstacles]
        emit_svg_frames(res.records, out / "frames", sc.sim.agent_radius, segs, args.frames)
    for t, a, b in res.transitions:
        print(f"tick {t:6d}  {a.value} -> {b.value}")
    print(f"finished at tick {res.world.tick}, centroid {summary['final_centroid']}")
    return 0


def cmd_transform(args):
    n = args.n or 5
    method = Planner(args.method or "macro")
    mcfg = macro.MacroConfig()
    if args.angle is not None:
        mcfg = replace(mcfg, angle_offset=math.radians(args.angle))
    bcfg = moebius.MoebiusConfig(variant=moebius.Variant(args.variant or "exact"))
    p = formation(n, args.r)
    sim = SimConfig(propulsion=0.0, goal=(1e6, 0.0))
    final, collisions = plan_outcome(p, method, mcfg, bcfg, sim.agent_radius)
    res = run_transform(make_world(p, sim, (), method, mcfg, bcfg), settle_tol=0.01 * args.r)
    rec = classify(p, final)
    emit_trace(res.records, args.out / "trace.csv")
    summary = {
        "method": method.value,
        "n": n,
        "case": rec.case.value,
        "collisions": collisions,
        "transform_time": round(res.world.tick * sim.dt, 9),
        "max_displacement": float(rec.per_agent_displacement.max()),
        "mean_displacement": float(rec.per_agent_displacement.mean()),
        "final_positions": final.by_id().tolist(),
    }
    emit_summary(summary, args.out / "summary.json")
    print(f"{method.value} n={n}: case {rec.case.value}, {collisions} collisions, "
          f"{summary['transform_time']:.2f} s simulated")
    return 0


def cmd_sweep_collisions(args):
    angles = [args.angle] if args.angle is not None else args.angles
    ns = [args.n] if args.n is not None else args.ns
    table = sweep_rotation_collisions([math.radians(a) for a in angles], ns,
                                      agent_radius=args.agent_radius)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "collisions.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n"] + [f"{a:g}" for a in angles])
        for n in ns:
            w.writerow([n] + list(table[n].values()))
    emit_summary({"agent_radius": args.agent_radius, "angles_deg": angles,
                  "collisions": {str(n): list(table[n].values()) for n in ns}},
                 args.out / "collisions.json")
    print("n    " + "".join(f"{a:>7g}" for a in angles))
    for n in ns:
        print(f"{n:<5d}" + "".join(f"{c:>7d}" for c in table[n].values()))
    return 0


def cmd_sweep_time(args):
    method = Planner(args.method or "macro")
    ns = [args.n] if args.n is not None else args.ns
    mcfg = None
    if args.angle is not None:
        mcfg = macro.MacroConfig(angle_offset=math.radians(args.angle))
    bcfg = moebius.MoebiusConfig(variant=moebius.Variant(args.variant or "exact"))
    rows = sweep_transform_time(method, ns, args.r, macro_cfg=mcfg, moebius_cfg=bcfg)
    emit_summary(rows, args.out / f"sweep_time_{method.value}.json")
    with open(args.out / f"sweep_time_{method.value}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "n", "transform_time", "collisions", "max_displacement",
                    "mean_displacement"])
        for s in rows:
            w.writerow([s.method, s.n, repr(s.transform_time), s.collisions,
                        repr(s.max_displacement), repr(s.mean_displacement)])
    for s in rows:
        print(f"n={s.n:3d}  t={s.transform_time:6.2f}s  collisions={s.collisions:4d}  "
              f"max_disp={s.max_displacement:.4f}")
    times = [s.transform_time for s in rows]
    print(f"mean transform time {np.mean(times):.3f} s (simulated)")
    return 0


def cmd_render(args):
    records = read_trace(args.trace)
    segs = []
    radius = args.agent_radius
    if args.config is not None:
        sc = load_scenario(args.config)
        segs = [ob.segment for ob in sc.course.obstacles]
        radius = sc.sim.agent_radius
    paths = emit_svg_frames(records, args.out, radius, segs, args.every)
    print(f"wrote {len(paths)} frames to {args.out}")
    return 0


COMMANDS = {
    "form": cmd_form,
    "transform": cmd_transform,
    "sweep-collisions": cmd_sweep_collisions,
    "sweep-time": cmd_sweep_time,
    "render": cmd_render,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidArgument) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except NumericDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OutputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
