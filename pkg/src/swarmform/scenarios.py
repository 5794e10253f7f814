"""Obstacle courses and scenario files.

Scenario files are TOML with the sections ``[primitives]``, ``[sim]``,
``[planner]``, ``[run]`` and one of ``[tunnel]`` / ``[funnel]``.  Every key is
optional; see ``configs/`` for documented defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import macro, moebius
from .errors import ConfigError, InvalidArgument
from .pattern import PrimaryPrimitives, formation_positions
from .sim import Obstacle, Planner, SimConfig, World, make_world


@dataclass(frozen=True)
class Course:
    """Obstacles plus the goal they imply."""

    obstacles: tuple
    goal: tuple
    exit_x: float


@dataclass(frozen=True)
class Scenario:
    name: str
    primitives: PrimaryPrimitives
    sim: SimConfig
    course: Course
    planner: Planner = Planner.MACRO
    macro_cfg: macro.MacroConfig = macro.MacroConfig()
    moebius_cfg: moebius.MoebiusConfig = moebius.MoebiusConfig()
    max_ticks: int = 4000

    def world(self) -> World:
        pattern = formation_positions(self.primitives)
        return make_world(pattern, self.sim, self.course.obstacles, self.planner,
                          self.macro_cfg, self.moebius_cfg)


def build_tunnel(width: float, length: float, entry_x: float = 0.0,
                 strength: float = -0.2, spacing: float = 0.5, goal_margin: float = 10.0) -> Course:
    if not (width > 0 and length > 0):
        raise InvalidArgument("tunnel width and length must be > 0")
    h = width / 2.0
    x1 = entry_x + length
    walls = (
        Obstacle.wall((entry_x, h), (x1, h), strength, spacing),
        Obstacle.wall((entry_x, -h), (x1, -h), strength, spacing),
    )
    return Course(walls, (x1 + goal_margin, 0.0), x1)


def build_funnel(entry_width: float, exit_width: float, length: float, entry_x: float = 0.0,
                 strength: float = -0.2, spacing: float = 0.5, goal_margin: float = 10.0) -> Course:
    if not (entry_width > exit_width > 0) or not length > 0:
        raise InvalidArgument("funnel needs entry_width > exit_width > 0 and length > 0")
    x1 = entry_x + length
    a, b = entry_width / 2.0, exit_width / 2.0
    walls = (
        Obstacle.wall((entry_x, a), (x1, b), strength, spacing),
        Obstacle.wall((entry_x, -a), (x1, -b), strength, spacing),
    )
    return Course(walls, (x1 + goal_margin, 0.0), x1)


def wall_slope(course: Course, index: int = 0) -> float:
    (x0, y0), (x1, y1) = course.obstacles[index].segment
    return (y1 - y0) / (x1 - x0)


DEFAULT_START = (-6.0, 0.0)


def tunnel_scenario(n: int = 5, planner: Planner = Planner.MACRO, width: float = 1.6,
                    length: float = 10.0, r: float = 1.0, **sim_overrides) -> Scenario:
    course = build_tunnel(width, length)
    sim = SimConfig(goal=course.goal, **sim_overrides)
    prims = PrimaryPrimitives(n, r, 1.0, 0.0, DEFAULT_START)
    return Scenario(f"tunnel-n{n}-{planner.value}", prims, sim, course, planner)


def funnel_scenario(n: int = 5, planner: Planner = Planner.MACRO, entry_width: float = 6.0,
                    exit_width: float = 1.6, length: float = 10.0, r: float = 1.0,
                    e: float = 1.25, **sim_overrides) -> Scenario:
    course = build_funnel(entry_width, exit_width, length)
    sim = SimConfig(goal=course.goal, **sim_overrides)
    prims = PrimaryPrimitives(n, r, e, 0.0, DEFAULT_START)
    return Scenario(f"funnel-n{n}-{planner.value}", prims, sim, course, planner)


def _pick(cls, table, section):
    names = {f.name for f in fields(cls)}
    unknown = set(table) - names
    if unknown:
        raise ConfigError(f"[{section}] unknown keys: {', '.join(sorted(unknown))}")
    return dict(table)


TOP_LEVEL_KEYS = {"name", "primitives", "sim", "tunnel", "funnel", "planner", "run"}


def scenario_from_dict(doc: dict, name: str = "scenario") -> Scenario:
    unknown = set(doc) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown sections or keys: {', '.join(sorted(unknown))}")
    try:
        prim = dict(doc.get("primitives", {}))
        if "phase_deg" in prim:
            prim["phase"] = math.radians(prim.pop("phase_deg"))
        prim.setdefault("n", 5)
        prim.setdefault("centroid", DEFAULT_START)
        prims = PrimaryPrimitives(**_pick(PrimaryPrimitives, prim, "primitives"))

        if "tunnel" in doc and "funnel" in doc:
            raise ConfigError("choose one of [tunnel] or [funnel]")
        if "funnel" in doc:
            course = build_funnel(**doc["funnel"])
        else:
            course = build_tunnel(**{"width": 1.6, "length": 10.0, **doc.get("tunnel", {})})

        sim_tab = dict(doc.get("sim", {}))
        sim_tab.setdefault("goal", course.goal)
        sim = SimConfig(**_pick(SimConfig, sim_tab, "sim"))

        plan = dict(doc.get("planner", {}))
        method = Planner(plan.pop("method", "macro"))
        variant = moebius.Variant(plan.pop("variant", "exact"))
        if "angle_offset_deg" in plan:
            plan["angle_offset"] = math.radians(plan.pop("angle_offset_deg"))
        macro_keys = {f.name for f in fields(macro.MacroConfig)}
        moeb_keys = {f.name for f in fields(moebius.MoebiusConfig)}
        unknown = set(plan) - macro_keys - moeb_keys
        if unknown:
            raise ConfigError(f"[planner] unknown keys: {', '.join(sorted(unknown))}")
        mkw = {k: v for k, v in plan.items() if k in macro_keys}
        mkw.setdefault("agent_radius", sim.agent_radius)
        mcfg = macro.MacroConfig(**mkw)
        bcfg = moebius.MoebiusConfig(variant=variant,
                                     **{k: v for k, v in plan.items() if k in moeb_keys})
        max_ticks = int(doc.get("run", {}).get("max_ticks", 4000))
        name = doc.get("name", name)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    return Scenario(name, prims, sim, course, method, mcfg, bcfg, max_ticks)


def load_scenario(path) -> Scenario:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return scenario_from_dict(doc, name=str(path))
