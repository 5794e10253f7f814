"""Particle environment: force sources, obstacles and the transformation trigger.

The swarm is a virtual structure.  A centroid particle is pushed by the
propulsive force towards the goal and by the repulsive obstacle emitters;
agents are pulled onto their formation slots around the centroid by
critically damped springs.  The net obstacle load on the centroid drives a
four-state machine:

    Normal -> Flattening -> Flattened -> Restoring -> Normal
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from . import macro, moebius
from .errors import InvalidArgument, NumericDivergence
from .pattern import PatternState


class Mode(enum.Enum):
    NORMAL = "Normal"
    FLATTENING = "Flattening"
    FLATTENED = "Flattened"
    RESTORING = "Restoring"


ALLOWED_TRANSITIONS = {
    (Mode.NORMAL, Mode.FLATTENING),
    (Mode.FLATTENING, Mode.FLATTENED),
    (Mode.FLATTENED, Mode.RESTORING),
    (Mode.RESTORING, Mode.NORMAL),
}


class Planner(enum.Enum):
    MACRO = "macro"
    MOEBIUS = "moebius"


@dataclass(frozen=True)
class ForceSource:
    anchor: tuple
    strength: float  # > 0 attracts, < 0 repels
    min_distance: float = 0.1

    def __post_init__(self):
        if not self.min_distance > 0:
            raise InvalidArgument("min_distance must be > 0")
        object.__setattr__(self, "anchor", tuple(float(v) for v in self.anchor))


@dataclass(frozen=True)
class Obstacle:
    segment: tuple  # ((x0, y0), (x1, y1))
    emitters: tuple

    def __post_init__(self):
        if any(e.strength >= 0 for e in self.emitters):
            raise InvalidArgument("obstacle emitters must be repulsive")

    @classmethod
    def wall(cls, a, b, strength=-0.2, spacing=0.5, min_distance=0.1):
        """Straight wall with repulsive emitters every ``spacing`` units (both ends included)."""
        if strength >= 0:
            raise InvalidArgument("wall strength must be negative (repulsive)")
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        k = max(1, math.ceil(np.linalg.norm(b - a) / spacing - 1e-9))
        pts = [a + (b - a) * (i / k) for i in range(k + 1)]
        return cls((tuple(a), tuple(b)), tuple(ForceSource(tuple(p), strength, min_distance) for p in pts))

    def force_at(self, point):
        return _emitter_force(self.emitters, point)


def _emitter_force(emitters, point):
    """Inverse-square force of a set of sources on a unit test particle at ``point``."""
    fx = fy = 0.0
    px, py = float(point[0]), float(point[1])
    for e in emitters:
        dx, dy = e.anchor[0] - px, e.anchor[1] - py
        d = math.hypot(dx, dy)
        if d == 0:
            continue
        dc = max(d, e.min_distance)
        mag = e.strength / (dc * dc)
        fx += mag * dx / d
        fy += mag * dy / d
    return np.array([fx, fy])


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    f_max: float = 0.3
    f_min: float = 0.15
    propulsion: float = 2.0
    goal: tuple = (20.0, 0.0)
    agent_radius: float = 0.075
    max_speed: float = 2.0
    damping: float = 0.02
    mass: float = 1.0
    k_slot: float = 50.0

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgument("dt must be > 0")
        if not (0 < self.f_min < self.f_max):
            raise InvalidArgument("need 0 < f_min < f_max")
        if not (self.agent_radius > 0 and self.max_speed > 0 and self.mass > 0):
            raise InvalidArgument("agent_radius, max_speed and mass must be > 0")
        if not 0 <= self.damping <= 1:
            raise InvalidArgument("damping must lie in [0, 1]")
        object.__setattr__(self, "goal", tuple(float(v) for v in self.goal))


@dataclass(frozen=True, eq=False)
class Particles:
    """Struct-of-arrays particle set (mass, position, velocity, age)."""

    mass: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    age: np.ndarray

    @classmethod
    def at_rest(cls, positions, mass=1.0):
        pos = np.array(positions, dtype=float).reshape(-1, 2)
        n = len(pos)
        return cls(np.full(n, float(mass)), pos, np.zeros((n, 2)), np.zeros(n))


@dataclass(frozen=True, eq=False)
class ActivePlan:
    """A plan being executed, expressed as slot offsets from the centroid."""

    kind: Planner
    start_tick: int
    ticks: np.ndarray  # keyframe tick stamps (macro) or per-tick samples (moebius)
    offsets: np.ndarray  # (k, n, 2)
    macro_plan: Optional[macro.MacroPlan] = None

    @property
    def length(self):
        return int(self.ticks[-1])

    def offsets_at(self, elapsed):
        if elapsed >= self.ticks[-1]:
            return self.offsets[-1]
        j = int(np.searchsorted(self.ticks, elapsed, side="right"))
        t0, t1 = self.ticks[j - 1], self.ticks[j]
        u = (elapsed - t0) / (t1 - t0)
        return self.offsets[j - 1] + u * (self.offsets[j] - self.offsets[j - 1])


@dataclass(frozen=True, eq=False)
class World:
    agents: Particles
    centroid: Particles  # a single particle
    obstacles: tuple
    config: SimConfig
    base: PatternState  # formation offsets held in Normal / Flattened modes
    planner: Planner = Planner.MACRO
    macro_cfg: macro.MacroConfig = field(default_factory=macro.MacroConfig)
    moebius_cfg: moebius.MoebiusConfig = field(default_factory=moebius.MoebiusConfig)
    mode: Mode = Mode.NORMAL
    active_plan: Optional[ActivePlan] = None
    last_macro: Optional[macro.MacroPlan] = None
    tick: int = 0
    time: float = 0.0

    @property
    def n(self):
        return len(self.agents.mass)

    @property
    def centroid_position(self):
        return self.centroid.position[0]

    def slots(self):
        """Current slot targets in world coordinates."""
        c = self.centroid_position
        if self.active_plan is not None:
            return c + self.active_plan.offsets_at(self.tick - self.active_plan.start_tick)
        return c + self.base.by_id()


def make_world(pattern: PatternState, config: SimConfig = SimConfig(), obstacles=(),
               planner: Planner = Planner.MACRO, macro_cfg=None, moebius_cfg=None) -> World:
    """World with agents at rest on their slots around the pattern centroid."""
    c = pattern.centroid
    base = pattern.translated(-c)
    kwargs = {}
    if macro_cfg is not None:
        kwargs["macro_cfg"] = macro_cfg
    if moebius_cfg is not None:
        kwargs["moebius_cfg"] = moebius_cfg
    return World(
        agents=Particles.at_rest(pattern.by_id(), config.mass),
        centroid=Particles.at_rest([c], config.mass),
        obstacles=tuple(obstacles),
        config=config,
        base=base,
        planner=planner,
        **kwargs,
    )


def net_centroid_force(w: World) -> np.ndarray:
    """Obstacle repulsion on the centroid plus the propulsive pull toward the goal."""
    c = w.centroid_position
    f = np.zeros(2)
    for ob in w.obstacles:
        f = f + ob.force_at(c)
    to_goal = np.asarray(w.config.goal) - c
    dist = float(np.hypot(*to_goal))
    if dist > 0 and w.config.propulsion != 0:
        f = f + w.config.propulsion * to_goal / dist
    return f


def obstacle_load(w: World) -> float:
    """Sum over obstacles of the magnitude of each obstacle's net force on the centroid.

    Used for the threshold trigger.  Per-obstacle magnitudes are summed so
    that the two walls of a symmetric tunnel do not cancel each other out.
    """
    c = w.centroid_position
    return float(sum(np.hypot(*ob.force_at(c)) for ob in w.obstacles))


def _ellipse_base(w: World) -> PatternState:
    b = w.base
    if b.s_x is None:
        raise InvalidArgument("macro planner needs an ellipse-model base pattern")
    return b


def _start_plan(w: World, direction) -> ActivePlan:
    n = w.n
    if w.planner is Planner.MACRO:
        if direction is moebius.Direction.CIRCLE_TO_LINE:
            plan = macro.plan_flatten(_ellipse_base(w), w.macro_cfg)
        else:
            plan = macro.plan_inverse(w.last_macro)
        base = PatternState(np.zeros((n, 2)), plan.base_phases)
        states = [macro.apply_keyframe(base, kf) for kf in plan.keyframes]
        offsets = np.stack([s.by_id() for s in states])
        return ActivePlan(Planner.MACRO, w.tick, np.asarray(plan.ticks, float), offsets, plan)
    wp = moebius.plan_moebius_transform(w.base, direction, w.moebius_cfg)
    samples = np.stack(wp.trajectory())
    order = np.argsort([a for a, _ in wp.per_agent])
    offsets = samples[:, order, :]
    return ActivePlan(Planner.MOEBIUS, w.tick, np.arange(len(samples), dtype=float), offsets)


def _finish_plan(w: World) -> PatternState:
    ap = w.active_plan
    final = ap.offsets[-1]
    if ap.kind is Planner.MACRO:
        kf = ap.macro_plan.keyframes[-1]
        phases = ap.macro_plan.base_phases if kf.phases is None else kf.phases
        return PatternState(final, np.asarray(phases) + kf.phase, s_x=kf.s_x, s_y=kf.s_y)
    return PatternState(final)


def start_transform(w: World) -> World:
    """Force a Normal world into Flattening regardless of the obstacle load."""
    if w.mode is not Mode.NORMAL:
        raise InvalidArgument(f"cannot start a transformation from {w.mode.value}")
    plan = _start_plan(w, moebius.Direction.CIRCLE_TO_LINE)
    return replace(w, mode=Mode.FLATTENING, active_plan=plan, last_macro=plan.macro_plan)


def update_mode(w: World, planner: Optional[Planner] = None) -> World:
    if planner is not None and planner is not w.planner:
        w = replace(w, planner=planner)
    cfg = w.config
    if w.mode is Mode.NORMAL:
        if obstacle_load(w) > cfg.f_max:
            return start_transform(w)
        return w
    if w.mode is Mode.FLATTENED:
        if obstacle_load(w) < cfg.f_min:
            plan = _start_plan(w, moebius.Direction.LINE_TO_CIRCLE)
            return replace(w, mode=Mode.RESTORING, active_plan=plan)
        return w
    ap = w.active_plan
    if ap is not None and w.tick - ap.start_tick >= ap.length:
        nxt = Mode.FLATTENED if w.mode is Mode.FLATTENING else Mode.NORMAL
        return replace(w, mode=nxt, active_plan=None, base=_finish_plan(w))
    return w


def _integrate(p: Particles, force, cfg: SimConfig) -> Particles:
    dt = cfg.dt
    vel = (p.velocity + force / p.mass[:, None] * dt) * (1.0 - cfg.damping)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    over = speed > cfg.max_speed
    if np.any(over):
        vel[over] *= (cfg.max_speed / speed[over])[:, None]
    return Particles(p.mass, p.position + vel * dt, vel, p.age + dt)


def step(w: World) -> World:
    cfg = w.config
    f_c = net_centroid_force(w)[None, :]
    centroid = _integrate(w.centroid, f_c, cfg)
    slots = w.slots()
    m = w.agents.mass[:, None]
    c_crit = 2.0 * np.sqrt(cfg.k_slot * m)
    f_a = cfg.k_slot * (slots - w.agents.position) + c_crit * (w.centroid.velocity - w.agents.velocity)
    agents = _integrate(w.agents, f_a, cfg)
    return replace(w, agents=agents, centroid=centroid, tick=w.tick + 1,
                   time=(w.tick + 1) * cfg.dt)


class TraceRecord(NamedTuple):
    tick: int
    sim_time: float
    mode: str
    agent_id: int
    x: float
    y: float
    vx: float
    vy: float


def records_for(w: World) -> list:
    pos, vel = w.agents.position, w.agents.velocity
    t = w.tick * w.config.dt
    return [
        TraceRecord(w.tick, t, w.mode.value, i, float(pos[i, 0]), float(pos[i, 1]),
                    float(vel[i, 0]), float(vel[i, 1]))
        for i in range(w.n)
    ]


def goal_reached(w: World) -> bool:
    g = np.asarray(w.config.goal)
    return float(np.hypot(*(w.centroid_position - g))) <= w.config.agent_radius


@dataclass
class RunResult:
    records: list
    world: World
    modes: list  # mode per recorded tick
    transitions: list  # (tick, from_mode, to_mode)


def run(w: World, max_ticks: int) -> RunResult:
    if max_ticks < 1:
        raise InvalidArgument("max_ticks must be >= 1")
    records, modes, transitions = [], [], []
    for _ in range(max_ticks):
        prev = w.mode
        w = update_mode(w)
        if w.mode is not prev:
            transitions.append((w.tick, prev, w.mode))
        records.extend(records_for(w))
        modes.append(w.mode)
        w = step(w)
        if not (np.all(np.isfinite(w.agents.position)) and np.all(np.isfinite(w.agents.velocity))
                and np.all(np.isfinite(w.centroid.position))):
            raise NumericDivergence(w.tick)
        if goal_reached(w):
            break
    return RunResult(records, w, modes, transitions)
