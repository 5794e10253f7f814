"""Trace CSV, JSON summaries and SVG frames."""

from __future__ import annotations

import csv
import json
import os
from collections import defaultdict
from pathlib import Path

from .sim import TraceRecord

TRACE_HEADER = ("tick", "sim_time", "mode", "agent_id", "x", "y", "vx", "vy")


class OutputError(OSError):
    pass


def _open_for_write(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_trace(records, path):
    # repr() gives the shortest decimal string that round-trips exactly
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for r in records:
            w.writerow((r.tick, repr(r.sim_time), r.mode, r.agent_id,
                        repr(r.x), repr(r.y), repr(r.vx), repr(r.vy)))


def read_trace(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(fh)
        header = next(rows)
        if tuple(header) != TRACE_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        return [
            TraceRecord(int(t), float(st), m, int(a), float(x), float(y), float(vx), float(vy))
            for t, st, m, a, x, y, vx, vy in rows
        ]


def emit_summary(summary, path):
    """Write a summary (dict, dataclass with ``as_dict`` or a list of them) as JSON."""
    def plain(o):
        if hasattr(o, "as_dict"):
            return o.as_dict()
        if isinstance(o, (list, tuple)):
            return [plain(v) for v in o]
        if isinstance(o, dict):
            return {str(k): plain(v) for k, v in o.items()}
        return o

    with _open_for_write(path) as fh:
        json.dump(plain(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _frames(records):
    by_tick = defaultdict(list)
    for r in records:
        by_tick[r.tick].append(r)
    return by_tick


def svg_frame(rows, agent_radius, obstacles=(), bounds=None, scale=40.0):
    xs = [r.x for r in rows] + [p[0] for ob in obstacles for p in ob]
    ys = [r.y for r in rows] + [p[1] for ob in obstacles for p in ob]
    if bounds is None:
        pad = 1.0
        bounds = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    x0, y0, x1, y1 = bounds
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def px(x, y):
        return (x - x0) * scale, (y1 - y) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for (ax, ay), (bx, by) in obstacles:
        (u0, v0), (u1, v1) = px(ax, ay), px(bx, by)
        out.append(f'<line x1="{u0:.2f}" y1="{v0:.2f}" x2="{u1:.2f}" y2="{v1:.2f}" '
                   f'stroke="black" stroke-width="2"/>')
    for r in sorted(rows, key=lambda r: r.agent_id):
        u, v = px(r.x, r.y)
        out.append(f'<circle cx="{u:.2f}" cy="{v:.2f}" r="{agent_radius * scale:.2f}" '
                   f'fill="steelblue"><title>agent {r.agent_id}</title></circle>')
    if rows:
        out.append(f'<text x="4" y="14" font-size="12">tick {rows[0].tick} {rows[0].mode}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_frames(records, out_dir, agent_radius, obstacles=(), every=50):
    """One SVG per sampled tick; returns the written paths.

    ``obstacles`` is a sequence of segments ((x0, y0), (x1, y1)).
    """
    frames = _frames(records)
    if not frames:
        return []
    segs = [tuple(map(tuple, s)) for s in obstacles]
    xs = [r.x for r in records] + [p[0] for s in segs for p in s]
    ys = [r.y for r in records] + [p[1] for s in segs for p in s]
    bounds = (min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1)
    ticks = sorted(frames)
    keep = ticks[::max(1, every)]
    if keep[-1] != ticks[-1]:
        keep.append(ticks[-1])
    paths = []
    for t in keep:
        path = os.path.join(out_dir, f"frame_{t:06d}.svg")
        with _open_for_write(path) as fh:
            fh.write(svg_frame(frames[t], agent_radius, segs, bounds))
        paths.append(path)
    return paths
