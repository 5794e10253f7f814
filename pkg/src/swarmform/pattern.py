"""Complex-plane formation model.

Agents sit on the vertices of a polygon inscribed in an ellipse with
semi-axes (s_x, s_y) around a centroid (h, k).  With elongation e = 1 the
ellipse is the circumcircle and the polygon is regular.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DegenerateInput, InvalidArgument

TWO_PI = 2.0 * math.pi


def normalize_angle(a):
    """Map an angle (scalar or array) into [0, 2*pi)."""
    out = np.mod(a, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class PolarComplex:
    modulus: float
    argument: float

    def __post_init__(self):
        if self.modulus < 0:
            raise InvalidArgument("modulus must be >= 0")
        object.__setattr__(self, "argument", normalize_angle(self.argument))


@dataclass(frozen=True)
class PrimaryPrimitives:
    n: int
    r: float = 1.0
    e: float = 1.0
    phase: float = 0.0
    centroid: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.n < 3:
            raise InvalidArgument(f"need at least 3 agents, got n={self.n}")
        if not self.r > 0:
            raise InvalidArgument("formation radius must be > 0")
        if not self.e > 0:
            raise InvalidArgument("elongation must be > 0")
        object.__setattr__(self, "centroid", Point2(*map(float, self.centroid)))


@dataclass(frozen=True)
class ShapingRadii:
    s_x: float
    s_y: float

    def __post_init__(self):
        if self.s_x < 0 or self.s_y < 0:
            raise InvalidArgument("shaping radii must be >= 0")


def _readonly(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PatternState:
    """Labelled agent positions.

    ``positions`` is an (n, 2) array ordered by agent id.  ``phases`` holds the
    parametric angle of each agent on the model ellipse; ``s_x``/``s_y`` are
    set when the state was produced by the ellipse model and ``None`` for
    free-form patterns.
    """

    positions: np.ndarray
    phases: np.ndarray = None
    ids: np.ndarray = None
    s_x: Optional[float] = None
    s_y: Optional[float] = None
    centroid: np.ndarray = field(init=False)

    def __post_init__(self):
        pos = _readonly(self.positions)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise InvalidArgument("positions must have shape (n, 2)")
        if not np.all(np.isfinite(pos)):
            raise InvalidArgument("positions must be finite")
        n = len(pos)
        ids = np.arange(n) if self.ids is None else self.ids
        ids = _readonly(ids, dtype=int)
        if sorted(ids.tolist()) != list(range(n)):
            raise InvalidArgument("agent ids must be 0..n-1 without duplicates")
        if self.phases is None:
            c = pos.mean(axis=0) if n else np.zeros(2)
            phases = np.arctan2(pos[:, 1] - c[1], pos[:, 0] - c[0])
        else:
            phases = self.phases
        phases = _readonly(normalize_angle(np.asarray(phases, dtype=float)))
        if phases.shape != (n,):
            raise InvalidArgument("need one phase per agent")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "centroid", _readonly(pos.mean(axis=0)))

    @property
    def n(self):
        return len(self.positions)

    def position_of(self, agent_id):
        return Point2(*self.positions[list(self.ids).index(agent_id)])

    def by_id(self):
        """Positions re-ordered so that row i belongs to agent i."""
        out = np.empty_like(self.positions)
        out[self.ids] = self.positions
        return out

    def translated(self, offset):
        return PatternState(self.positions + np.asarray(offset, float), self.phases,
                            self.ids, self.s_x, self.s_y)


def nth_roots(z: PolarComplex, n: int) -> list[Point2]:
    """All n-th roots of z in increasing root index."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if z.modulus == 0:
        raise DegenerateInput("all roots of 0 coincide at the origin")
    rad = z.modulus ** (1.0 / n)
    out = []
    for k in range(n):
        w = cmath.rect(rad, (z.argument + TWO_PI * k) / n)
        out.append(Point2(w.real, w.imag))
    return out


def shaping_radii(r: float, e: float) -> ShapingRadii:
    if not (r > 0 and e > 0):
        raise InvalidArgument("r and e must both be > 0")
    return ShapingRadii(r * e, r / e)


def ellipse_points(centroid, s_x, s_y, phases):
    phases = np.asarray(phases, dtype=float)
    c = np.asarray(centroid, dtype=float)
    return np.column_stack([c[0] + s_x * np.cos(phases), c[1] + s_y * np.sin(phases)])


def uniform_phases(n, phase=0.0):
    return phase + TWO_PI * np.arange(n) / n


def formation_positions(prims: PrimaryPrimitives, radii: Optional[ShapingRadii] = None) -> PatternState:
    if radii is None:
        radii = shaping_radii(prims.r, prims.e)
    phases = uniform_phases(prims.n, prims.phase)
    pos = ellipse_points(prims.centroid, radii.s_x, radii.s_y, phases)
    return PatternState(pos, phases, s_x=radii.s_x, s_y=radii.s_y)


def formation(n, r=1.0, e=1.0, phase=0.0, centroid=(0.0, 0.0)) -> PatternState:
    """Shorthand for ``formation_positions(PrimaryPrimitives(...))``."""
    return formation_positions(PrimaryPrimitives(n, r, e, phase, centroid))


def linear_distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def adjacent_distances(p: PatternState) -> np.ndarray:
    """Distances between neighbours taken in phase order, wrapping around."""
    order = np.argsort(p.phases, kind="stable")
    pts = p.positions[order]
    return np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)


def is_regular(p: PatternState, tol: float = 1e-9) -> bool:
    if p.n < 3:
        raise InvalidArgument("need at least 3 agents")
    sides = adjacent_distances(p)
    radii = np.linalg.norm(p.positions - p.centroid, axis=1)
    if sides.max() == 0 or radii.max() == 0:
        return False
    return bool(np.ptp(sides) <= tol * sides.max() and np.ptp(radii) <= tol * radii.max())
