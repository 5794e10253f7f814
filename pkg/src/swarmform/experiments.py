"""Rotation/collision and transform-time sweeps."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import macro, moebius
from .pattern import PatternState, formation
from .sim import (Mode, Planner, RunResult, SimConfig, World, make_world, records_for,
                  start_transform, step, update_mode)

TABLE_ANGLES_DEG = (15.0, 30.0, 45.0, 60.0)
TABLE_NS = (3, 4, 5, 6)


@dataclass(frozen=True)
class SweepSummary:
    method: str
    n: int
    transform_time: float
    collisions: int
    max_displacement: float
    mean_displacement: float

    def as_dict(self):
        return asdict(self)


def flatten_collisions(n, angle, r=1.0, agent_radius=0.075, cfg=None):
    cfg = cfg or macro.MacroConfig()
    cfg = replace(cfg, angle_offset=angle, agent_radius=agent_radius)
    p = formation(n, r)
    plan = macro.plan_flatten(p, cfg)
    return macro.count_collisions(macro.plan_states(p, plan), agent_radius)


def sweep_rotation_collisions(angles=None, ns=TABLE_NS, r=1.0, agent_radius=0.075):
    """Collision counts of the flatten trajectory for each (angle, n); angles in radians.

    Returns ``{n: {angle: count}}``.
    """
    if angles is None:
        angles = [math.radians(a) for a in TABLE_ANGLES_DEG]
    return {n: {a: flatten_collisions(n, a, r, agent_radius) for a in angles} for n in ns}


def plan_outcome(p: PatternState, method: Planner, macro_cfg=None, moebius_cfg=None,
                 agent_radius=0.075):
    """Final pattern and collision count of one transformation, without physics."""
    if method is Planner.MACRO:
        plan = macro.plan_flatten(p, macro_cfg or macro.MacroConfig(agent_radius=agent_radius))
        states = macro.plan_states(p, plan)
        return states[-1], macro.count_collisions(states, agent_radius)
    plan = moebius.plan_moebius_transform(p, moebius.Direction.CIRCLE_TO_LINE,
                                          moebius_cfg or moebius.MoebiusConfig())
    final = moebius.plan_final_pattern(p, plan)
    order = np.argsort([a for a, _ in plan.per_agent])
    traj = [frame[order] for frame in plan.trajectory()]
    return final, macro.count_collisions(traj, agent_radius)


def run_transform(w: World, settle_tol=0.01, max_ticks=20000) -> RunResult:
    """Run one forced transformation until the plan is done and agents have settled."""
    w = start_transform(w)
    records, modes, transitions = [], [], [(w.tick, Mode.NORMAL, Mode.FLATTENING)]
    for _ in range(max_ticks):
        records.extend(records_for(w))
        modes.append(w.mode)
        w = step(w)
        if w.mode is Mode.FLATTENING:
            w = update_mode(w)
            if w.mode is Mode.FLATTENED:
                transitions.append((w.tick, Mode.FLATTENING, Mode.FLATTENED))
        if w.mode is Mode.FLATTENED:
            err = np.max(np.linalg.norm(w.agents.position - w.slots(), axis=1))
            if err <= settle_tol:
                break
    records.extend(records_for(w))
    modes.append(w.mode)
    return RunResult(records, w, modes, transitions)


def measure_transform_time(w: World, settle_tol=0.01, max_ticks=20000) -> float:
    """Simulated seconds from plan start until the plan is done and agents have settled."""
    res = run_transform(w, settle_tol, max_ticks)
    return round((res.world.tick - w.tick) * w.config.dt, 9)


def sweep_transform_time(method: Planner, ns, r=1.0, sim=None, macro_cfg=None,
                         moebius_cfg=None, settle_tol=0.01):
    sim = sim or SimConfig(propulsion=0.0, goal=(1e6, 0.0))
    out = []
    for n in ns:
        p = formation(n, r)
        final, collisions = plan_outcome(p, method, macro_cfg, moebius_cfg, sim.agent_radius)
        disp = np.linalg.norm(final.by_id() - p.by_id(), axis=1)
        w = make_world(p, sim, (), method, macro_cfg, moebius_cfg)
        t = measure_transform_time(w, settle_tol * r)
        out.append(SweepSummary(method.value, n, t, collisions, float(disp.max()), float(disp.mean())))
    return out


def extent_ratio(positions) -> float:
    """Height over width of the axis-aligned bounding box of the agents."""
    pts = np.asarray(positions, float)
    span = np.ptp(pts, axis=0)
    return float(span[1] / span[0]) if span[0] > 0 else math.inf


def min_extent_ratio(records) -> float:
    """Smallest height/width ratio over all ticks of a trace (how far the pattern deflated)."""
    by_tick = {}
    for r in records:
        by_tick.setdefault(r.tick, []).append((r.x, r.y))
    return min(extent_ratio(v) for v in by_tick.values())
