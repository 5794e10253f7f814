"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with the tolerance it used and
its runtime against the budget; the lines are repeated in the terminal
summary.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
from scipy.spatial.distance import pdist

from swarmform.classify import TransformationCase as Case, alignment_residual, classify, verify_inverse
from swarmform.cli import main
from swarmform.experiments import plan_outcome, sweep_rotation_collisions
from swarmform.macro import execute, plan_flatten, plan_inverse
from swarmform.moebius import MoebiusMap, apply_moebius, circle_to_line, line_to_circle
from swarmform.pattern import PatternState, PolarComplex, formation, nth_roots, shaping_radii
from swarmform.scenarios import tunnel_scenario
from swarmform.sim import Mode, Planner, run

RESULTS = []


@contextmanager
def criterion(number, text, tolerance, budget):
    t0 = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = str(exc).splitlines()[0] if str(exc) else "assertion failed"
        raise
    finally:
        elapsed = time.perf_counter() - t0
        if failure is None and elapsed >= budget:
            failure = "runtime over budget"
        status = "FAIL" if failure else "PASS"
        line = f"[{status}] criterion {number}: {text} (tol {tolerance}; {elapsed:.2f} s < {budget:g} s)"
        if failure:
            line += f": {failure}"
        RESULTS.append(line)
        print(line)
    assert elapsed < budget, f"criterion {number} took {elapsed:.2f} s (budget {budget} s)"


def test_criterion_01_formation_math():
    with criterion(1, "agents at distance r; nth roots match roots of unity", "1e-12 rel", 1):
        for n in range(3, 26):
            for r in (0.5, 1.0, 3.7):
                p = formation(n, r, 1.0, 0.25, (2.0, -1.0))
                d = np.linalg.norm(p.positions - np.array([2.0, -1.0]), axis=1)
                assert np.max(np.abs(d - r)) <= 1e-12 * r
            roots = np.array(nth_roots(PolarComplex(1.0, 0.0), n))
            k = np.arange(n)
            closed = np.column_stack([np.cos(2 * np.pi * k / n), np.sin(2 * np.pi * k / n)])
            assert np.max(np.abs(roots - closed)) <= 1e-12


def test_criterion_02_shaping_radii_identity():
    with criterion(2, "s_x * s_y = r^2 over a 1000-point (r, e) grid", "1e-12 rel", 1):
        worst = 0.0
        for r in np.geomspace(1e-3, 1e3, 40):
            for e in np.geomspace(1e-2, 1e2, 25):
                sr = shaping_radii(r, e)
                worst = max(worst, abs(sr.s_x * sr.s_y - r * r) / (r * r))
        assert worst <= 1e-12, worst


def test_criterion_03_moebius_exactness():
    with criterion(3, "circle-to-line on real axis, agrees with general map, inversion involution",
                   "1e-12", 1):
        cayley = MoebiusMap.cayley()
        phis = 2 * np.pi * np.arange(10_000) / 10_000
        for phi in phis:
            if abs(phi - math.pi) < 1e-12:
                continue  # the pole
            z = (math.cos(phi), math.sin(phi))
            w = circle_to_line(z)
            assert abs(w[1]) < 1e-12, (phi, w)
            g = apply_moebius(cayley, z)
            assert math.hypot(w[0] - g[0], w[1] - g[1]) < 1e-12 * max(1.0, abs(w[0])), (phi, w, g)
        rng = np.random.default_rng(3)
        for rho, ang in zip(np.geomspace(1e-3, 1e3, 2000), rng.uniform(0, 2 * np.pi, 2000)):
            p = (rho * math.cos(ang), rho * math.sin(ang))
            q = line_to_circle(line_to_circle(p))
            assert math.hypot(q[0] - p[0], q[1] - p[1]) < 1e-12 * max(1.0, rho)


def test_criterion_04_line_to_circle_geometry():
    with criterion(4, "line y = c inverts onto circle centre (0, 1/2c), radius 1/2c", "1e-9", 1):
        for c in (0.25, 0.5, 1.0, 2.0):
            for x in np.linspace(-100, 100, 401):
                u, v = line_to_circle((x, c))
                assert abs(math.hypot(u, v - 1 / (2 * c)) - 1 / (2 * c)) < 1e-9


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_criterion_05_case_taxonomy():
    with criterion(5, "rigid -> Case1/2, scaling -> Case3, one-fixed flattening -> Case4 "
                      "over 100 random patterns", "congruence 1e-6", 5):
        rng = np.random.default_rng(2024)
        done = 0
        while done < 100:
            n = int(rng.integers(3, 12))
            pts = rng.uniform(-5, 5, (n, 2))
            p = PatternState(pts)
            rel = pts - p.centroid
            if pdist(pts).min() < 0.2 or np.linalg.svd(rel, compute_uv=False)[-1] < 0.5:
                continue
            if np.linalg.norm(rel, axis=1).min() < 1e-2:
                continue
            theta = rng.uniform(0.2, 2 * math.pi - 0.2)
            pivot = rng.uniform(-30, 30, 2)
            q = PatternState((pts - pivot) @ _rot(theta).T + pivot)
            if np.min(np.linalg.norm(q.positions - pts, axis=1)) > 1e-3:
                assert classify(p, q).case is Case.CASE1
            k = int(rng.integers(n))
            q2 = PatternState((pts - pts[k]) @ _rot(theta).T + pts[k])
            assert classify(p, q2).case is Case.CASE2
            s = rng.choice([rng.uniform(0.3, 0.9), rng.uniform(1.1, 3.0)])
            assert classify(p, PatternState(p.centroid + s * rel)).case is Case.CASE3
            flat = pts.copy()
            flat[:, 1] = pts[k, 1]
            if np.all(np.abs(np.delete(pts[:, 1] - pts[k, 1], k)) > 1e-3):
                assert classify(p, PatternState(flat)).case is Case.CASE4
            done += 1


def test_criterion_06_method1_end_to_end():
    with criterion(6, "flatten is collinear, evenly spaced for n >= 5, and inverts back (n = 3..25)",
                   "deviation 1e-6*s_x, CV 0.10, inverse 1e-6", 10):
        for n in range(3, 26):
            p = formation(n, 1.0, 1.0, 0.1)
            plan = plan_flatten(p)
            f = execute(p, plan)
            rel = f.positions - f.centroid
            _, _, vt = np.linalg.svd(rel)
            assert np.max(np.abs(rel @ vt[1])) <= 1e-6 * f.s_x, n
            if n >= 5:
                gaps = np.diff(np.sort(rel @ vt[0]))
                assert gaps.std() / gaps.mean() <= 0.10, n
            assert verify_inverse(p, execute(f, plan_inverse(plan)), 1e-6), n


def test_criterion_07_table_collisions():
    with criterion(7, "15 deg column collision-free for n = 3..6; some >= 30 deg cell collides",
                   "agent_radius 0.075", 10):
        table = sweep_rotation_collisions([math.radians(a) for a in (15, 30, 45, 60)], (3, 4, 5, 6))
        fifteen = math.radians(15)
        assert all(table[n][fifteen] == 0 for n in table), table
        assert any(c >= 1 for n in table for a, c in table[n].items() if a > fifteen), table


def test_criterion_08_moebius_displacement_trend():
    with criterion(8, "max Moebius displacement strictly decreasing over n = 3..11",
                   "strict", 5):
        disp = []
        for n in range(3, 12):
            p = formation(n)
            final, _ = plan_outcome(p, Planner.MOEBIUS)
            disp.append(float(np.max(np.linalg.norm(final.by_id() - p.by_id(), axis=1))))
        rises = [(n, round(a, 4), round(b, 4)) for n, (a, b) in enumerate(zip(disp, disp[1:]), 3)
                 if not b < a]
        assert not rises, f"not decreasing at (n, d_n, d_n+1) = {rises}"


def test_criterion_09_tunnel_regression():
    with criterion(9, "tunnel n = 5 cycles all modes, exits, restores its pattern",
                   "congruence 1e-3", 30):
        sc = tunnel_scenario(5)
        w0 = sc.world()
        res = run(w0, sc.max_ticks)
        assert [(a, b) for _, a, b in res.transitions] == [
            (Mode.NORMAL, Mode.FLATTENING), (Mode.FLATTENING, Mode.FLATTENED),
            (Mode.FLATTENED, Mode.RESTORING), (Mode.RESTORING, Mode.NORMAL)]
        assert res.world.centroid_position[0] > sc.course.exit_x
        assert alignment_residual(PatternState(w0.agents.position),
                                  PatternState(res.world.agents.position)) <= 1e-3
        assert res.transitions[0][0] == 452
        np.testing.assert_allclose(res.world.agents.position[0], [20.89270733257182, 8.0e-09],
                                   atol=1e-9)


def test_criterion_10_determinism(tmp_path):
    with criterion(10, "every scenario and sweep emits byte-identical files twice", "exact bytes", 60):
        def emit(d):
            for cfg in ("tunnel", "funnel"):
                for method in ("macro", "moebius"):
                    main(["form", "--scenario", cfg, "--method", method, "--out", str(d / cfg / method)])
            main(["sweep-collisions", "--out", str(d / "collisions")])
            for method in ("macro", "moebius"):
                main(["sweep-time", "--method", method, "--ns", *map(str, range(3, 26)),
                      "--out", str(d / "time")])
            return {p.relative_to(d): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}

        a, b = emit(tmp_path / "a"), emit(tmp_path / "b")
        assert a.keys() == b.keys() and len(a) >= 13
        assert a == b
