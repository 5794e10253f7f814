"""Transformation taxonomy: compare a pattern before and after a move.

Two patterns share the same geometric relationships when one maps onto the
other by a proper rigid motion (rotation + translation).  Scaling and
reflection both count as a change of geometry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import pdist

from .errors import DegenerateInput, InvalidArgument
from .pattern import PatternState


class TransformationCase(enum.Enum):
    CASE1 = 1  # same geometry, every agent moved
    CASE2 = 2  # same geometry, some agent fixed
    CASE3 = 3  # new geometry, every agent moved
    CASE4 = 4  # new geometry, some agent fixed

    @property
    def elementary(self):
        return self in (TransformationCase.CASE1, TransformationCase.CASE2)


@dataclass(frozen=True, eq=False)
class GeometricSignature:
    sorted_pairwise_distances: np.ndarray
    canonical_coordinates: np.ndarray


@dataclass(frozen=True, eq=False)
class TransformRecord:
    before: PatternState
    after: PatternState
    case: TransformationCase
    per_agent_displacement: np.ndarray


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def signature(p: PatternState) -> GeometricSignature:
    if p.n < 3:
        raise InvalidArgument("need at least 3 agents")
    rel = p.by_id() - p.centroid
    radii = np.linalg.norm(rel, axis=1)
    if radii.max() == 0:
        raise DegenerateInput("all agents coincide")
    # agent 0 defines the reference direction unless it sits on the centroid
    anchor = rel[0] if radii[0] > 1e-12 * radii.max() else rel[int(np.argmax(radii))]
    canon = rel @ _rotation(-np.arctan2(anchor[1], anchor[0])).T
    canon = canon - canon.mean(axis=0)
    return GeometricSignature(np.sort(pdist(p.positions)), canon)


def _kabsch(a, b):
    """Proper rotation R minimising |a @ R.T - b| for centred point sets."""
    u, _, vt = np.linalg.svd(b.T @ a)
    d = np.sign(np.linalg.det(u @ vt)) or 1.0
    return u @ np.diag([1.0, d]) @ vt


def alignment_residual(p: PatternState, q: PatternState, radius_tol: float = 1e-6) -> float:
    """Smallest max-residual of a proper rigid motion taking p's point set to q's.

    Correspondences are unlabelled.  Candidates send the agent of p farthest
    from its centroid onto each agent of q at the same distance (within
    ``radius_tol``); each candidate is refined by optimal assignment and a
    Kabsch fit.
    """
    if p.n != q.n:
        raise InvalidArgument("patterns have different agent counts")
    a = p.positions - p.centroid
    b = q.positions - q.centroid
    ra = np.linalg.norm(a, axis=1)
    rb = np.linalg.norm(b, axis=1)
    i = int(np.argmax(ra))
    gap = np.abs(rb - ra[i])
    cand = np.flatnonzero(gap <= radius_tol)
    if cand.size == 0:
        cand = [int(np.argmin(gap))]
    best = np.inf
    for j in cand:
        theta = np.arctan2(b[j, 1], b[j, 0]) - np.arctan2(a[i, 1], a[i, 0])
        cost = np.linalg.norm((a @ _rotation(theta).T)[:, None, :] - b[None, :, :], axis=2)
        rows, cols = linear_sum_assignment(cost)
        fitted = a[rows] @ _kabsch(a[rows], b[cols]).T
        res = min(float(np.max(np.linalg.norm(fitted - b[cols], axis=1))),
                  float(cost[rows, cols].max()))
        best = min(best, res)
    return best


def congruent(p: PatternState, q: PatternState, tol: float = 1e-6) -> bool:
    if p.n != q.n:
        raise InvalidArgument("patterns have different agent counts")
    dp, dq = np.sort(pdist(p.positions)), np.sort(pdist(q.positions))
    if dp.size and np.max(np.abs(dp - dq)) > 2 * tol:
        return False
    return alignment_residual(p, q, radius_tol=2 * tol) <= tol


def displacements(before: PatternState, after: PatternState) -> np.ndarray:
    if before.n != after.n or sorted(before.ids.tolist()) != sorted(after.ids.tolist()):
        raise InvalidArgument("patterns do not carry the same agents")
    return np.linalg.norm(after.by_id() - before.by_id(), axis=1)


def classify(before: PatternState, after: PatternState, tol: float = 1e-6) -> TransformRecord:
    disp = displacements(before, after)
    all_moved = bool(np.all(disp > tol))
    if congruent(before, after, tol):
        case = TransformationCase.CASE1 if all_moved else TransformationCase.CASE2
    else:
        case = TransformationCase.CASE3 if all_moved else TransformationCase.CASE4
    disp.setflags(write=False)
    return TransformRecord(before, after, case, disp)


def verify_inverse(before: PatternState, after_roundtrip: PatternState, tol: float = 1e-6) -> bool:
    if before.n != after_roundtrip.n:
        raise InvalidArgument("patterns have different agent counts")
    return bool(np.all(displacements(before, after_roundtrip) <= tol))
