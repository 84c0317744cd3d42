"""Shared helpers for comparing traces against the small-step oracle and
for matching 3D traces with their 2D projections."""

from __future__ import annotations

import random

import numpy as np

from tetrabeacon.attraction import Polygon2, Region3, as_region, attract
from tetrabeacon.smallstep import smallstep_attract


def sample_in_tets(rng: random.Random, region: Region3, margin=0.03):
    i = rng.randrange(region.m)
    w = np.array([margin + rng.random() for _ in range(4)])
    w /= w.sum()
    return tuple(w @ region.verts[region.tets[i]])


def sample_in_polygon(rng: random.Random, poly: Polygon2, margin_frac=0.01):
    from tetrabeacon.attraction import _point_segment_distance2

    lo = poly.verts.min(axis=0)
    hi = poly.verts.max(axis=0)
    margin = margin_frac * poly.diag
    while True:
        x = np.array([lo[0] + rng.random() * (hi[0] - lo[0]),
                      lo[1] + rng.random() * (hi[1] - lo[1])])
        if not poly._strictly_inside(x):
            continue
        dmin = min(_point_segment_distance2(x, *poly.edge(i))
                   for i in range(poly.n))
        if dmin > margin:
            return tuple(x)


def compare_with_oracle(region, pairs, tol_frac=1e-4):
    """Trace every pair with both engines; returns (mismatches, worst_err).

    ``mismatches`` counts status disagreements; ``worst_err`` is the worst
    terminal-point distance (fraction of the bounding-box diagonal) among
    agreeing stuck pairs.
    """
    reg = as_region(region)
    diag = reg.diag
    mismatches = []
    worst = 0.0
    for p, b in pairs:
        path = attract(p, b, region)
        oracle = smallstep_attract(p, b, region)
        if path.reached != oracle.reached:
            mismatches.append((p, b, path.reached, oracle.reached))
        elif not path.reached:
            err = float(np.linalg.norm(np.asarray(path.dead_point)
                                       - np.asarray(oracle.terminal))) / diag
            worst = max(worst, err)
    return mismatches, worst


def _cross_norm(a, b) -> float:
    if len(a) == 2:
        return abs(float(a[0] * b[1] - a[1] * b[0]))
    return float(np.linalg.norm(np.cross(a, b)))


def collapse_polyline(points, tol):
    """Drop consecutive duplicates and collinear interior points."""
    pts = [np.asarray(p, dtype=float) for p in points]
    out = []
    for p in pts:
        if out and np.linalg.norm(p - out[-1]) <= tol:
            out[-1] = p
            continue
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            ab = b - a
            bp = p - b
            if _cross_norm(ab, bp) <= tol * max(1.0, float(np.linalg.norm(ab))) \
                    and float(ab @ bp) >= 0.0:
                out.pop()
            else:
                break
        out.append(p)
    return out


def vertical_contacts_only(path, region: Region3, tol=1e-9) -> bool:
    """True when every constrained segment runs on a facet or edge whose
    supporting plane (or direction span) is vertical."""
    for kind, feature in path.segments:
        if kind == "facet":
            n = region.boundary[feature]["normal"]
            if abs(n[2]) > tol:
                return False
        elif kind == "edge":
            u, w = feature
            for bf_id in region.edge_bfs.get(feature, []):
                n = region.boundary[bf_id]["normal"]
                if abs(n[2]) > tol:
                    return False
    return True


def projection_matches(d3, polygon, p3, b3, tol_frac=1e-6):
    """Check the 3D trace's xy-projection against the 2D trace.

    Returns None when the 3D trace touches non-vertical boundary (outside
    the projection property's premise), otherwise (ok, detail).
    """
    reg = as_region(d3)
    path3 = attract(p3, b3, d3)
    if not vertical_contacts_only(path3, reg):
        return None
    poly = as_region(polygon)
    path2 = attract((p3[0], p3[1]), (b3[0], b3[1]), poly)
    tol = tol_frac * reg.diag
    pts3 = collapse_polyline([(w[0], w[1]) for w in path3.waypoints], tol)
    pts2 = collapse_polyline(path2.waypoints, tol)
    if path3.reached != path2.reached:
        return False, f"status mismatch: 3D {path3.reached} vs 2D {path2.reached}"
    if len(pts3) != len(pts2):
        return False, f"matched event counts differ: {len(pts3)} vs {len(pts2)}"
    for a, b in zip(pts3, pts2):
        if float(np.linalg.norm(np.asarray(a) - np.asarray(b))) > tol:
            return False, f"waypoints diverge: {tuple(a)} vs {tuple(b)}"
    return True, ""
