"""Small-step projected-descent oracle for attraction traces.

This is the independent check for the event-driven tracer: take a tiny
step straight toward the beacon; if that leaves the region, project back
onto the nearest boundary point. No ray casting, no feature bookkeeping,
no event logic. With a step of 1e-6 of the bounding-box diagonal the
terminal point of a trace is resolved to well below the comparison
tolerances.

Two optimizations keep the literal semantics while making million-step
traces affordable:

* free flight along the fixed ray toward the beacon advances by jumps
  bounded by the current distance to the boundary, which can never tunnel
  through a wall and is exactly collinear with the h-step path;
* the boundary projection caches the last triangle and only rescans all
  of them when the cached one stops being the unambiguous nearest.

Near a dead point the per-step progress decays geometrically; the loop
detects the stall over a window of steps and extrapolates the geometric
tail (block Richardson) to estimate the limit point.

The inner loops are numba-compiled; without numba the same code runs as
plain Python, correct but slow.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .attraction import Polygon2, Region3, RegionLike, as_region, _as_floats

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

REACHED = 1
STUCK = 2
EXHAUSTED = 3

_STALL_RATIO = 1e-6     # windowed progress per step below ratio*h stalls
_WINDOW = 256
_MAX_ITERS = 120_000_000


@njit(cache=True)
def _tet_slack(planes, i, x0, x1, x2):
    worst = 1e300
    for j in range(4):
        s = planes[i, j, 0] * x0 + planes[i, j, 1] * x1 \
            + planes[i, j, 2] * x2 + planes[i, j, 3]
        if s < worst:
            worst = s
    return worst


@njit(cache=True)
def _closest_on_triangle(tri, p0, p1, p2, out):
    """Closest point of a 3D triangle to p (Ericson's region walk)."""
    ax, ay, az = tri[0, 0], tri[0, 1], tri[0, 2]
    bx, by, bz = tri[1, 0], tri[1, 1], tri[1, 2]
    cx, cy, cz = tri[2, 0], tri[2, 1], tri[2, 2]
    abx, aby, abz = bx - ax, by - ay, bz - az
    acx, acy, acz = cx - ax, cy - ay, cz - az
    apx, apy, apz = p0 - ax, p1 - ay, p2 - az
    d1 = abx * apx + aby * apy + abz * apz
    d2 = acx * apx + acy * apy + acz * apz
    if d1 <= 0.0 and d2 <= 0.0:
        out[0], out[1], out[2] = ax, ay, az
        return
    bpx, bpy, bpz = p0 - bx, p1 - by, p2 - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        out[0], out[1], out[2] = bx, by, bz
        return
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        t = d1 / (d1 - d3)
        out[0], out[1], out[2] = ax + t * abx, ay + t * aby, az + t * abz
        return
    cpx, cpy, cpz = p0 - cx, p1 - cy, p2 - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        out[0], out[1], out[2] = cx, cy, cz
        return
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        t = d2 / (d2 - d6)
        out[0], out[1], out[2] = ax + t * acx, ay + t * acy, az + t * acz
        return
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        out[0] = bx + t * (cx - bx)
        out[1] = by + t * (cy - by)
        out[2] = bz + t * (cz - bz)
        return
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    out[0] = ax + abx * v + acx * w
    out[1] = ay + aby * v + acy * w
    out[2] = az + abz * v + acz * w


@njit(cache=True)
def _boundary_distance3(tris, x0, x1, x2, proj):
    best = 1e300
    nb = tris.shape[0]
    for t in range(nb):
        _closest_on_triangle(tris[t], x0, x1, x2, proj)
        dd = (proj[0] - x0) ** 2 + (proj[1] - x1) ** 2 + (proj[2] - x2) ** 2
        if dd < best:
            best = dd
    return math.sqrt(best)


@njit(cache=True)
def _project_boundary3(tris, y0, y1, y2, proj, best):
    """Nearest boundary point to y; returns the owning triangle index."""
    best_d = 1e300
    best_t = -1
    nb = tris.shape[0]
    for t in range(nb):
        _closest_on_triangle(tris[t], y0, y1, y2, proj)
        dd = (proj[0] - y0) ** 2 + (proj[1] - y1) ** 2 + (proj[2] - y2) ** 2
        if dd < best_d:
            best_d = dd
            best_t = t
            best[0], best[1], best[2] = proj[0], proj[1], proj[2]
    return best_t


@njit(cache=True)
def _cached_projection_ok(tri, y0, y1, y2, proj, h):
    """Projection onto the cached triangle, valid when it lands strictly
    inside the triangle and within 2h of y (so no other triangle can be
    decisively closer without a rescan)."""
    ax, ay, az = tri[0, 0], tri[0, 1], tri[0, 2]
    abx, aby, abz = tri[1, 0] - ax, tri[1, 1] - ay, tri[1, 2] - az
    acx, acy, acz = tri[2, 0] - ax, tri[2, 1] - ay, tri[2, 2] - az
    nx = aby * acz - abz * acy
    ny = abz * acx - abx * acz
    nz = abx * acy - aby * acx
    nn = nx * nx + ny * ny + nz * nz
    if nn <= 0.0:
        return False
    s = ((y0 - ax) * nx + (y1 - ay) * ny + (y2 - az) * nz) / nn
    p0 = y0 - s * nx
    p1 = y1 - s * ny
    p2 = y2 - s * nz
    dd = (p0 - y0) ** 2 + (p1 - y1) ** 2 + (p2 - y2) ** 2
    if dd > 4.0 * h * h:
        return False
    # barycentric with a safety margin; borders force a full rescan
    dot_aa = abx * abx + aby * aby + abz * abz
    dot_ab = abx * acx + aby * acy + abz * acz
    dot_bb = acx * acx + acy * acy + acz * acz
    px, py, pz = p0 - ax, p1 - ay, p2 - az
    dot_pa = px * abx + py * aby + pz * abz
    dot_pb = px * acx + py * acy + pz * acz
    den = dot_aa * dot_bb - dot_ab * dot_ab
    if den <= 0.0:
        return False
    u = (dot_bb * dot_pa - dot_ab * dot_pb) / den
    v = (dot_aa * dot_pb - dot_ab * dot_pa) / den
    margin = 1e-9
    if u < margin or v < margin or u + v > 1.0 - margin:
        return False
    proj[0], proj[1], proj[2] = p0, p1, p2
    return True


@njit(cache=True)
def _descend3(planes, tris, px, py, pz, bx, by, bz, h, reach, tol_in,
              diag, max_iters, terminal):
    m = planes.shape[0]
    x0, x1, x2 = px, py, pz
    proj = np.empty(3)
    best = np.empty(3)
    cur_tet = -1
    for i in range(m):
        if _tet_slack(planes, i, x0, x1, x2) >= -tol_in:
            cur_tet = i
            break
    cur_tri = -1
    sliding = False
    iters = 0
    window_left = _WINDOW
    window_dist = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2 + (bz - x2) ** 2)
    # block-Richardson state: 0 = not stalled, 1..2 = collecting blocks
    phase = 0
    p0x = p0y = p0z = 0.0
    p1x = p1y = p1z = 0.0
    while iters < max_iters:
        iters += 1
        dx = bx - x0
        dy = by - x1
        dz = bz - x2
        dist = math.sqrt(dx * dx + dy * dy + dz * dz)
        if dist <= reach:
            terminal[0], terminal[1], terminal[2] = bx, by, bz
            return REACHED, iters
        inv = 1.0 / dist

        if phase == 0 and not sliding:
            # free flight: jumps inside the boundary-distance ball are
            # exactly collinear with the h-step path and cannot tunnel
            dwall = _boundary_distance3(tris, x0, x1, x2, proj)
            if dwall > 2.0 * h:
                jump = 0.9 * dwall
                if jump > dist:
                    jump = dist
                x0 += jump * dx * inv
                x1 += jump * dy * inv
                x2 += jump * dz * inv
                window_left = _WINDOW
                window_dist = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2
                                        + (bz - x2) ** 2)
                continue

        step = h if dist > h else dist
        y0 = x0 + step * dx * inv
        y1 = x1 + step * dy * inv
        y2 = x2 + step * dz * inv

        inside = False
        if cur_tet >= 0 and _tet_slack(planes, cur_tet, y0, y1, y2) >= -tol_in:
            inside = True
        else:
            for i in range(m):
                if _tet_slack(planes, i, y0, y1, y2) >= -tol_in:
                    inside = True
                    cur_tet = i
                    break
        if inside:
            sliding = False
        else:
            sliding = True
            if cur_tri >= 0 and _cached_projection_ok(tris[cur_tri], y0, y1, y2,
                                                      proj, h):
                y0, y1, y2 = proj[0], proj[1], proj[2]
            else:
                cur_tri = _project_boundary3(tris, y0, y1, y2, proj, best)
                y0, y1, y2 = best[0], best[1], best[2]
        x0, x1, x2 = y0, y1, y2

        window_left -= 1
        if window_left == 0:
            window_left = _WINDOW
            dist_now = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2
                                 + (bz - x2) ** 2)
            stalled = window_dist - dist_now < _STALL_RATIO * h * _WINDOW
            window_dist = dist_now
            if phase == 0:
                if stalled:
                    phase = 1
                    p0x, p0y, p0z = x0, x1, x2
            elif phase == 1:
                p1x, p1y, p1z = x0, x1, x2
                phase = 2
            else:
                d1 = math.sqrt((p1x - p0x) ** 2 + (p1y - p0y) ** 2
                               + (p1z - p0z) ** 2)
                d2 = math.sqrt((x0 - p1x) ** 2 + (x1 - p1y) ** 2
                               + (x2 - p1z) ** 2)
                terminal[0], terminal[1], terminal[2] = x0, x1, x2
                if d1 > 0.0 and d2 < d1:
                    q = d2 / d1
                    factor = q / (1.0 - q)
                    cap = 0.02 * diag / max(d2, 1e-300)
                    if factor > cap:
                        factor = cap
                    terminal[0] = x0 + (x0 - p1x) * factor
                    terminal[1] = x1 + (x1 - p1y) * factor
                    terminal[2] = x2 + (x2 - p1z) * factor
                    return STUCK, iters
                if d2 >= d1 and not stalled:
                    phase = 0  # progress resumed; not a dead point yet
                else:
                    return STUCK, iters
    terminal[0], terminal[1], terminal[2] = x0, x1, x2
    return EXHAUSTED, iters


@njit(cache=True)
def _inside_polygon(verts, x0, x1):
    n = verts.shape[0]
    inside = False
    for i in range(n):
        ax, ay = verts[i, 0], verts[i, 1]
        j = i + 1
        if j == n:
            j = 0
        bx, by = verts[j, 0], verts[j, 1]
        if (ay > x1) != (by > x1):
            t = (x1 - ay) / (by - ay)
            if ax + t * (bx - ax) > x0:
                inside = not inside
    return inside


@njit(cache=True)
def _boundary_distance2(verts, x0, x1):
    n = verts.shape[0]
    best = 1e300
    for i in range(n):
        ax, ay = verts[i, 0], verts[i, 1]
        j = i + 1
        if j == n:
            j = 0
        cx, cy = verts[j, 0], verts[j, 1]
        ex, ey = cx - ax, cy - ay
        denom = ex * ex + ey * ey
        t = 0.0
        if denom > 0.0:
            t = ((x0 - ax) * ex + (x1 - ay) * ey) / denom
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        qx, qy = ax + t * ex, ay + t * ey
        dd = (qx - x0) ** 2 + (qy - x1) ** 2
        if dd < best:
            best = dd
    return math.sqrt(best)


@njit(cache=True)
def _project_boundary2(verts, y0, y1, out):
    n = verts.shape[0]
    best = 1e300
    for i in range(n):
        ax, ay = verts[i, 0], verts[i, 1]
        j = i + 1
        if j == n:
            j = 0
        cx, cy = verts[j, 0], verts[j, 1]
        ex, ey = cx - ax, cy - ay
        denom = ex * ex + ey * ey
        t = 0.0
        if denom > 0.0:
            t = ((y0 - ax) * ex + (y1 - ay) * ey) / denom
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        qx, qy = ax + t * ex, ay + t * ey
        dd = (qx - y0) ** 2 + (qy - y1) ** 2
        if dd < best:
            best = dd
            out[0], out[1] = qx, qy
    return best


@njit(cache=True)
def _descend2(verts, px, py, bx, by, h, reach, diag, max_iters, terminal):
    x0, x1 = px, py
    out = np.empty(2)
    sliding = False
    iters = 0
    window_left = _WINDOW
    window_dist = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2)
    phase = 0
    p0x = p0y = p1x = p1y = 0.0
    while iters < max_iters:
        iters += 1
        dx = bx - x0
        dy = by - x1
        dist = math.sqrt(dx * dx + dy * dy)
        if dist <= reach:
            terminal[0], terminal[1] = bx, by
            return REACHED, iters
        inv = 1.0 / dist

        if phase == 0 and not sliding:
            dwall = _boundary_distance2(verts, x0, x1)
            if dwall > 2.0 * h:
                jump = 0.9 * dwall
                if jump > dist:
                    jump = dist
                x0 += jump * dx * inv
                x1 += jump * dy * inv
                window_left = _WINDOW
                window_dist = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2)
                continue

        step = h if dist > h else dist
        y0 = x0 + step * dx * inv
        y1 = x1 + step * dy * inv
        if _inside_polygon(verts, y0, y1):
            sliding = False
        else:
            sliding = True
            _project_boundary2(verts, y0, y1, out)
            y0, y1 = out[0], out[1]
        x0, x1 = y0, y1

        window_left -= 1
        if window_left == 0:
            window_left = _WINDOW
            dist_now = math.sqrt((bx - x0) ** 2 + (by - x1) ** 2)
            stalled = window_dist - dist_now < _STALL_RATIO * h * _WINDOW
            window_dist = dist_now
            if phase == 0:
                if stalled:
                    phase = 1
                    p0x, p0y = x0, x1
            elif phase == 1:
                p1x, p1y = x0, x1
                phase = 2
            else:
                d1 = math.sqrt((p1x - p0x) ** 2 + (p1y - p0y) ** 2)
                d2 = math.sqrt((x0 - p1x) ** 2 + (x1 - p1y) ** 2)
                terminal[0], terminal[1] = x0, x1
                if d1 > 0.0 and d2 < d1:
                    q = d2 / d1
                    factor = q / (1.0 - q)
                    cap = 0.02 * diag / max(d2, 1e-300)
                    if factor > cap:
                        factor = cap
                    terminal[0] = x0 + (x0 - p1x) * factor
                    terminal[1] = x1 + (x1 - p1y) * factor
                    return STUCK, iters
                if d2 >= d1 and not stalled:
                    phase = 0
                else:
                    return STUCK, iters
    terminal[0], terminal[1] = x0, x1
    return EXHAUSTED, iters


class SmallStepResult:
    __slots__ = ("reached", "terminal", "iterations")

    def __init__(self, status: int, terminal, iterations: int):
        if status == EXHAUSTED:
            raise RuntimeError("small-step oracle exhausted its iteration cap")
        self.reached = status == REACHED
        self.terminal = tuple(float(c) for c in terminal)
        self.iterations = int(iterations)


def _region_arrays3(region: Region3):
    cached = getattr(region, "_oracle_arrays", None)
    if cached is None:
        tris = np.array([bf["coords"] for bf in region.boundary], dtype=float)
        cached = (np.ascontiguousarray(region.planes),
                  np.ascontiguousarray(tris))
        region._oracle_arrays = cached
    return cached


def smallstep_attract(p, b, region: RegionLike,
                      step: Optional[float] = None,
                      reach: Optional[float] = None) -> SmallStepResult:
    """Run the projected-descent oracle for one (point, beacon) pair.

    ``step`` defaults to 1e-6 of the bounding-box diagonal; ``reach``
    defaults to twice the step (the oracle cannot resolve finer).
    """
    reg = as_region(region)
    p = _as_floats(p)
    b = _as_floats(b)
    if isinstance(reg, Region3):
        h = step if step is not None else 1e-6 * reg.diag
        r = reach if reach is not None else 2.0 * h
        planes, tris = _region_arrays3(reg)
        terminal = np.zeros(3)
        status, iters = _descend3(planes, tris, p[0], p[1], p[2],
                                  b[0], b[1], b[2],
                                  h, r, 1e-12 * reg.diag, reg.diag,
                                  _MAX_ITERS, terminal)
        return SmallStepResult(status, terminal, iters)
    poly: Polygon2 = reg
    h = step if step is not None else 1e-6 * poly.diag
    r = reach if reach is not None else 2.0 * h
    terminal = np.zeros(2)
    status, iters = _descend2(np.ascontiguousarray(poly.verts),
                              p[0], p[1], b[0], b[1],
                              h, r, poly.diag, _MAX_ITERS, terminal)
    return SmallStepResult(status, terminal, iters)
