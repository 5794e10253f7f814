"""Mathematical transformation via linear fractional (Moebius) maps.

Pipeline for one pattern: move to a local frame where the circumcircle is
the unit circle, map every agent with a discrete circle->line or line->circle
function, magnify and move back to the global frame, then discretize the
straight path from each agent to its destination.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegenerateInput, InvalidArgument, PoleError
from .pattern import Point2, PatternState

POLE_TOL = 1e-9
ON_CIRCLE_TOL = 4 * sys.float_info.epsilon


class Variant(enum.Enum):
    EXACT = "exact"
    PAPER_LITERAL = "paper-literal"


class Direction(enum.Enum):
    CIRCLE_TO_LINE = "circle-to-line"
    LINE_TO_CIRCLE = "line-to-circle"


@dataclass(frozen=True)
class MoebiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, complex(getattr(self, k)))
        if abs(self.a * self.d - self.b * self.c) <= 1e-12:
            raise InvalidArgument("ad - bc must be nonzero")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def cayley(cls):
        """w = i(1 - z)/(1 + z): unit circle onto the real axis."""
        return cls(-1j, 1j, 1, 1)

    @classmethod
    def reciprocal(cls):
        """w = 1/z."""
        return cls(0, 1, 1, 0)


@dataclass(frozen=True)
class FrameRecord:
    origin: Point2
    magnification: float

    def __post_init__(self):
        if not self.magnification > 0:
            raise InvalidArgument("magnification must be > 0")
        object.__setattr__(self, "origin", Point2(*map(float, self.origin)))


@dataclass(frozen=True)
class MoebiusConfig:
    variant: Variant = Variant.EXACT
    target_span: Optional[float] = None  # None: diameter of the input circumcircle
    line_offset: float = 0.5
    stagger_ticks: int = 25
    step_length: float = 0.01  # plan speed (1.0 units/s) * dt (0.01 s)

    def __post_init__(self):
        if not self.step_length > 0:
            raise InvalidArgument("step_length must be > 0")
        if self.line_offset == 0:
            raise InvalidArgument("line_offset must be nonzero")
        if self.stagger_ticks < 0:
            raise InvalidArgument("stagger_ticks must be >= 0")


@dataclass(frozen=True, eq=False)
class WaypointPlan:
    per_agent: tuple  # ((agent_id, (n_i, 2) array), ...)
    step_length: float
    stagger: tuple

    @property
    def destinations(self):
        return np.array([wp[-1] for _, wp in self.per_agent])

    @property
    def starts(self):
        return np.array([wp[0] for _, wp in self.per_agent])

    @property
    def ticks(self):
        """Ticks until the last agent reaches its destination."""
        return max(s + len(wp) - 1 for s, (_, wp) in zip(self.stagger, self.per_agent))

    def positions_at(self, tick):
        """Agent positions (ordered as per_agent) after ``tick`` ticks."""
        out = np.empty((len(self.per_agent), 2))
        for i, (s, (_, wp)) in enumerate(zip(self.stagger, self.per_agent)):
            out[i] = wp[min(max(tick - s, 0), len(wp) - 1)]
        return out

    def trajectory(self):
        return [self.positions_at(t) for t in range(self.ticks + 1)]


def _z(p):
    return complex(p[0], p[1])


def to_local(p: PatternState):
    """Centre on the centroid and scale so the farthest agent is on the unit circle."""
    rel = p.positions - p.centroid
    r = float(np.max(np.linalg.norm(rel, axis=1)))
    if r == 0:
        raise DegenerateInput("all agents sit on the centroid")
    pts = [Point2(float(x), float(y)) for x, y in rel / r]
    return pts, FrameRecord(Point2(*p.centroid), r)


def to_global(points, frame: FrameRecord):
    m = frame.magnification
    return [Point2(frame.origin.x + m * x, frame.origin.y + m * y) for x, y in points]


def circle_to_line(p, variant: Variant = Variant.EXACT) -> Point2:
    x, y = float(p[0]), float(p[1])
    off_circle = 1.0 - x * x - y * y
    if abs(off_circle) <= ON_CIRCLE_TOL:
        # rounding noise of a unit-circle input; near the pole it would be amplified by 1/den
        off_circle = 0.0
    if variant is Variant.PAPER_LITERAL:
        den = 1.0 + x * x + y * y
        return Point2(2.0 * y / den, off_circle / den)
    den = (1.0 + x) ** 2 + y * y
    if den <= POLE_TOL ** 2:
        raise PoleError(f"point {(x, y)} is at the pole z = -1")
    return Point2(2.0 * y / den, off_circle / den)


def line_to_circle(p) -> Point2:
    x, y = float(p[0]), float(p[1])
    r2 = x * x + y * y
    if r2 <= 1e-24:
        raise PoleError("inversion of the origin is undefined")
    return Point2(x / r2, y / r2)


def apply_moebius(m: MoebiusMap, p) -> Point2:
    z = _z(p)
    den = m.c * z + m.d
    if abs(den) <= 1e-12:
        raise PoleError(f"point {tuple(p)} is a pole of the map")
    w = (m.a * z + m.b) / den
    return Point2(w.real, w.imag)


def auto_magnification(local_images, target_span: float) -> float:
    if not target_span > 0:
        raise InvalidArgument("target_span must be > 0")
    pts = np.asarray(local_images, dtype=float)
    span = float(pdist(pts).max()) if len(pts) > 1 else 0.0
    if span == 0:
        raise DegenerateInput("images coincide")
    return target_span / span


def discretize_path(start, dest, step_length: float) -> list:
    if not step_length > 0:
        raise InvalidArgument("step_length must be > 0")
    a = np.asarray(start, dtype=float)
    b = np.asarray(dest, dtype=float)
    length = float(np.linalg.norm(b - a))
    if length == 0:
        return [Point2(*a)]
    k = max(1, math.ceil(length / step_length - 1e-9))
    return [Point2(*(a + (b - a) * (i / k))) for i in range(k + 1)]


def anti_pole_rotation(angles: np.ndarray) -> float:
    """Smallest rotation that puts z = -1 in the middle of the widest angular gap."""
    a = np.sort(np.mod(angles, 2 * math.pi))
    gaps = np.diff(np.append(a, a[0] + 2 * math.pi))
    widest = gaps.max()
    best = None
    for i in np.flatnonzero(gaps >= widest - 1e-9):
        mid = a[i] + gaps[i] / 2.0
        beta = math.remainder(math.pi - mid, 2 * math.pi)
        key = (round(abs(beta), 12), -beta)
        if best is None or key < best[0]:
            best = (key, beta)
    return best[1]


def _rotate(points, angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.asarray(points, float) @ np.array([[c, -s], [s, c]]).T


def _fit_direction(rel):
    """Unit direction of the least-squares line through centred points."""
    _, _, vt = np.linalg.svd(rel, full_matrices=False)
    d = vt[0]
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = -d
    return math.atan2(d[1], d[0])


@dataclass(frozen=True, eq=False)
class MoebiusResult:
    """Intermediate products of one discrete transformation."""

    local_points: np.ndarray  # inputs to the map, after pre-rotation / offset
    local_images: np.ndarray
    frame: FrameRecord  # origin and magnification used to go back to global
    destinations: np.ndarray  # global, ordered as the input pattern rows
    rotation: float  # pre-rotation (circle->line) or line angle (line->circle)


def moebius_destinations(p: PatternState, direction: Direction,
                         cfg: MoebiusConfig = MoebiusConfig()) -> MoebiusResult:
    local, frame = to_local(p)
    local = np.asarray(local, dtype=float)
    r = frame.magnification
    span = cfg.target_span if cfg.target_span is not None else 2.0 * r
    if direction is Direction.CIRCLE_TO_LINE:
        beta = anti_pole_rotation(np.arctan2(local[:, 1], local[:, 0]))
        pts = _rotate(local, beta)
        images = []
        for i, q in enumerate(pts):
            try:
                images.append(circle_to_line(q, cfg.variant))
            except PoleError as exc:
                raise PoleError(str(exc), agent_id=int(p.ids[i])) from None
        images = np.asarray(images)
        m = auto_magnification(images, span)
        out_frame = FrameRecord(frame.origin, m)
        dest = np.asarray(to_global(images, out_frame))
        return MoebiusResult(pts, images, out_frame, dest, beta)

    # line -> circle: put the fitted line horizontal at height line_offset
    theta = _fit_direction(local)
    flat = _rotate(local, -theta)
    pts = flat + np.array([0.0, cfg.line_offset])
    images = []
    for i, q in enumerate(pts):
        try:
            images.append(line_to_circle(q))
        except PoleError as exc:
            raise PoleError(str(exc), agent_id=int(p.ids[i])) from None
    images = np.asarray(images)
    m = auto_magnification(images, span)
    centre = np.array([0.0, 1.0 / (2.0 * cfg.line_offset)])
    # recentre the image circle on the pattern centroid and undo the line rotation
    back = _rotate(images - centre, theta)
    out_frame = FrameRecord(frame.origin, m)
    dest = np.asarray(to_global(back, out_frame))
    return MoebiusResult(pts, images, out_frame, dest, theta)


def plan_moebius_transform(p: PatternState, direction: Direction,
                           cfg: MoebiusConfig = MoebiusConfig()) -> WaypointPlan:
    res = moebius_destinations(p, direction, cfg)
    per_agent = []
    stagger = []
    for row, agent_id in enumerate(p.ids):
        wp = np.asarray(discretize_path(p.positions[row], res.destinations[row], cfg.step_length))
        wp.setflags(write=False)
        per_agent.append((int(agent_id), wp))
        stagger.append(cfg.stagger_ticks if agent_id % 2 == 1 else 0)
    return WaypointPlan(tuple(per_agent), cfg.step_length, tuple(stagger))


def plan_final_pattern(p: PatternState, plan: WaypointPlan) -> PatternState:
    return PatternState(plan.destinations, ids=[a for a, _ in plan.per_agent])
