"""Swarm pattern formation: ellipse patterns, two flattening planners and a particle simulator."""

from .classify import TransformationCase, classify, congruent, verify_inverse
from .errors import (ConfigError, DegenerateInput, InvalidArgument, NumericDivergence,
                     PoleError, SwarmError)
from .macro import MacroConfig, count_collisions, execute, plan_flatten, plan_inverse
from .moebius import Direction, MoebiusConfig, Variant, plan_moebius_transform
from .pattern import PatternState, PrimaryPrimitives, formation, nth_roots, shaping_radii
from .scenarios import funnel_scenario, load_scenario, tunnel_scenario
from .sim import Mode, Planner, SimConfig, make_world, run

__all__ = [
    "ConfigError", "DegenerateInput", "Direction", "InvalidArgument", "MacroConfig", "Mode",
    "MoebiusConfig", "NumericDivergence", "PatternState", "Planner", "PoleError",
    "PrimaryPrimitives", "SimConfig", "SwarmError", "TransformationCase", "Variant",
    "classify", "congruent", "count_collisions", "execute", "formation", "funnel_scenario",
    "load_scenario", "make_world", "nth_roots", "plan_flatten", "plan_inverse",
    "plan_moebius_transform", "run", "shaping_radii", "tunnel_scenario", "verify_inverse",
]
