"""Macroscopic transformation: flatten a polygon to a line and back.

The whole sequence is driven through the ellipse model parameters.  A plan is
a list of keyframes (global phase offset, s_x, s_y and optionally explicit
per-agent phases) timed in whole simulation ticks:

1. rotate by a predefined angle offset (phase ramp),
2. deflate s_y to zero, inflating s_x at the same time when the line would
   otherwise be too crowded,
3. for n >= 5, reassign per-agent phases so the projections on the line are
   evenly spaced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgument
from .pattern import PatternState, ellipse_points, normalize_angle


@dataclass(frozen=True)
class MacroConfig:
    angle_offset: float = math.radians(15.0)
    steps: int = 100  # equal decrements of s_y
    rotation_steps: int = 10
    corrective_steps: int = 20
    inflate_x: Optional[bool] = None  # None: decide from the crowding rule
    s_x_target: Optional[float] = None
    agent_radius: float = 0.075
    safety: float = 1.5
    speed: float = 1.0  # peak slot speed along the plan, world units / s
    dt: float = 0.01  # keyframe times are whole multiples of this

    def __post_init__(self):
        if self.steps < 1 or self.rotation_steps < 1 or self.corrective_steps < 1:
            raise InvalidArgument("step counts must be >= 1")
        if not (self.speed > 0 and self.dt > 0 and self.agent_radius > 0):
            raise InvalidArgument("speed, dt and agent_radius must be > 0")


@dataclass(frozen=True)
class MacroKeyframe:
    time_offset: float
    phase: float
    s_x: float
    s_y: float
    phases: Optional[tuple] = None  # explicit per-agent phases, replaces the base phases

    def __post_init__(self):
        if self.time_offset < 0:
            raise InvalidArgument("time_offset must be >= 0")
        if self.s_x < 0 or self.s_y < 0:
            raise InvalidArgument("shaping radii must be >= 0")


@dataclass(frozen=True)
class MacroPlan:
    keyframes: tuple
    angle_offset: float
    corrective_phases: Optional[tuple]
    base_phases: tuple
    dt: float
    forward: bool = True

    @property
    def duration(self):
        return self.keyframes[-1].time_offset

    @property
    def ticks(self):
        return [round(kf.time_offset / self.dt) for kf in self.keyframes]


def rotate_pattern(p: PatternState, angle: float) -> PatternState:
    """Rotate about the centroid by advancing every phase.

    Ellipse-model states are re-evaluated on their own ellipse, which is a
    rigid rotation when s_x == s_y.  Free-form states are rotated rigidly.
    """
    phases = p.phases + angle
    if p.s_x is not None and p.s_y is not None:
        pos = ellipse_points(p.centroid, p.s_x, p.s_y, phases)
    else:
        c, s = math.cos(angle), math.sin(angle)
        rel = p.positions - p.centroid
        pos = p.centroid + rel @ np.array([[c, -s], [s, c]]).T
    return PatternState(pos, phases, p.ids, p.s_x, p.s_y)


def apply_keyframe(p: PatternState, kf: MacroKeyframe) -> PatternState:
    base = p.phases if kf.phases is None else np.asarray(kf.phases, dtype=float)
    phases = base + kf.phase
    pos = ellipse_points(p.centroid, kf.s_x, kf.s_y, phases)
    return PatternState(pos, phases, p.ids, kf.s_x, kf.s_y)


def inflation_target(n, s_x, cfg: MacroConfig):
    """Line half-length after flattening (s_x unchanged unless crowded)."""
    if cfg.s_x_target is not None:
        return max(s_x, cfg.s_x_target)
    crowded = 2.0 * s_x / (n - 1) < 3.0 * cfg.agent_radius
    if cfg.inflate_x or (cfg.inflate_x is None and crowded):
        return max(s_x, n * 2.0 * cfg.agent_radius * cfg.safety / 2.0)
    return s_x


def corrective_targets(phases: np.ndarray) -> np.ndarray:
    """Per-agent phases giving evenly spaced projections cos(phase) on [-1, 1].

    Agents are matched to grid slots in order of their current projection,
    and each keeps its half of the ellipse (upper or lower), so the order
    along the line is preserved.
    """
    n = len(phases)
    proj = np.cos(phases)
    order = np.lexsort((np.arange(n), -proj))  # largest projection first, ties by index
    grid = np.arccos(np.clip(1.0 - 2.0 * np.arange(n) / (n - 1), -1.0, 1.0))
    lower = np.sin(phases) < 0
    out = np.empty(n)
    out[order] = grid
    out = np.where(lower, 2.0 * math.pi - out, out)
    return normalize_angle(out)


def _blend_phases(src, dst, t):
    """Phases whose cosines interpolate linearly from src to dst (same half-plane)."""
    c = (1.0 - t) * np.cos(src) + t * np.cos(dst)
    a = np.arccos(np.clip(c, -1.0, 1.0))
    return np.where(np.sin(dst) < 0, 2.0 * math.pi - a, a)


def _timed(states, cfg_speed, dt):
    """Integer tick stamps: each segment lasts max displacement / speed (at least one tick)."""
    ticks = [0]
    for a, b in zip(states[:-1], states[1:]):
        disp = float(np.max(np.linalg.norm(b - a, axis=1)))
        ticks.append(ticks[-1] + max(1, math.ceil(disp / (cfg_speed * dt) - 1e-9)))
    return ticks


def plan_flatten(p: PatternState, cfg: MacroConfig = MacroConfig()) -> MacroPlan:
    n = p.n
    if n < 3:
        raise InvalidArgument("need at least 3 agents")
    if p.s_x is None or p.s_y is None:
        raise InvalidArgument("plan_flatten needs an ellipse-model pattern (s_x, s_y known)")
    s_x0, s_y0 = float(p.s_x), float(p.s_y)
    s_x1 = inflation_target(n, s_x0, cfg)
    alpha = float(cfg.angle_offset)

    raw = [(0.0, s_x0, s_y0, None)]
    for k in range(1, cfg.rotation_steps + 1):
        raw.append((alpha * k / cfg.rotation_steps, s_x0, s_y0, None))
    for k in range(1, cfg.steps + 1):
        t = k / cfg.steps
        s_y = 0.0 if k == cfg.steps else s_y0 * (1.0 - t)
        raw.append((alpha, s_x0 + (s_x1 - s_x0) * t, s_y, None))

    corrective = None
    if n >= 5:
        rotated = normalize_angle(p.phases + alpha)
        corrective = corrective_targets(rotated)
        for k in range(1, cfg.corrective_steps + 1):
            t = k / cfg.corrective_steps
            ph = corrective if k == cfg.corrective_steps else _blend_phases(rotated, corrective, t)
            raw.append((0.0, s_x1, 0.0, tuple(float(v) for v in ph)))

    states = [
        ellipse_points((0.0, 0.0), sx, sy, (p.phases if ph is None else np.asarray(ph)) + off)
        for off, sx, sy, ph in raw
    ]
    ticks = _timed(states, cfg.speed, cfg.dt)
    keyframes = tuple(
        MacroKeyframe(tk * cfg.dt, off, sx, sy, ph) for tk, (off, sx, sy, ph) in zip(ticks, raw)
    )
    return MacroPlan(
        keyframes,
        alpha,
        None if corrective is None else tuple(float(v) for v in corrective),
        tuple(float(v) for v in p.phases),
        cfg.dt,
    )


def plan_inverse(plan: MacroPlan) -> MacroPlan:
    ticks = plan.ticks
    total = ticks[-1]
    rev = [total - tk for tk in reversed(ticks)]
    keyframes = tuple(
        replace(kf, time_offset=tk * plan.dt) for tk, kf in zip(rev, reversed(plan.keyframes))
    )
    return replace(plan, keyframes=keyframes, angle_offset=-plan.angle_offset,
                   forward=not plan.forward)


def plan_states(p: PatternState, plan: MacroPlan) -> list:
    """Pattern at every keyframe, with the plan's base phases around p's centroid."""
    base = PatternState(p.positions, plan.base_phases, p.ids, p.s_x, p.s_y)
    return [apply_keyframe(base, kf) for kf in plan.keyframes]


def execute(p: PatternState, plan: MacroPlan) -> PatternState:
    return plan_states(p, plan)[-1]


def _pair_min_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum pairwise distance over the straight-line motion from a to b."""
    d0 = a[:, None, :] - a[None, :, :]
    d1 = b[:, None, :] - b[None, :, :]
    v = d1 - d0
    vv = np.einsum("ijk,ijk->ij", v, v)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(vv > 0, -np.einsum("ijk,ijk->ij", d0, v) / vv, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = d0 + t[..., None] * v
    return np.linalg.norm(closest, axis=2)


def count_collisions(trajectory: Sequence, agent_radius: float) -> int:
    """Unordered agent pairs that come closer than 2 * agent_radius at any time.

    Consecutive states are joined by straight-line motion and the closest
    approach on each segment is computed exactly.
    """
    if not agent_radius > 0:
        raise InvalidArgument("agent_radius must be > 0")
    frames = [s.by_id() if isinstance(s, PatternState) else np.asarray(s, float) for s in trajectory]
    if not frames:
        return 0
    n = len(frames[0])
    hit = np.zeros((n, n), dtype=bool)
    pairs = [(frames[0], frames[0])] + list(zip(frames[:-1], frames[1:]))
    for a, b in pairs:
        hit |= _pair_min_distances(a, b) < 2.0 * agent_radius
    return int(np.triu(hit, k=1).sum())
