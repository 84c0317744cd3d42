"""Event-driven simulation of beacon attraction.

A pulled point moves greedily so its distance to the enabled beacon
decreases as fast as possible: straight free flight in the interior, and
constrained sliding on boundary features it hits, until it reaches the
beacon or gets stuck at a dead point (a local minimum of the distance on
its current feature with no decreasing departure).

The tracer works on floating-point mirrors of the exact regions: a
3D region is a tetrahedral decomposition, a 2D region a simple polygon.
Both tracers share the same event structure:

* free flight is a straight segment toward the beacon, advanced through
  the tetrahedra (cell walk) or against the polygon edges, ending at the
  first boundary contact or at the beacon;
* on a feature, motion heads for the feature's closest point to the
  beacon (the in-plane/in-line foot), stopping where the feature ends;
* departures compare distance-decrease rates over all features containing
  the point and the interior cone; the best strictly decreasing option
  wins, exact ties are flagged on the path for inspection.

Distances to the beacon are non-increasing along every produced path,
which the path constructor asserts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .decomposition import TetDecomposition

Vec = np.ndarray


class TraceError(RuntimeError):
    """Non-termination or internal inconsistency in a trace (diagnostic)."""


class RegionError(ValueError):
    """Point outside the region, or malformed region input."""


@dataclass
class TraceConfig:
    """Tolerances of the tracer; lengths scale with the bounding box.

    ``reach_tolerance`` and ``max_events`` default per region (1e-9 of the
    bounding-box diagonal and 10*m + 64 events).
    """

    reach_tolerance: Optional[float] = None
    max_events: Optional[int] = None
    descent_tolerance: float = 1e-12

    def resolved(self, diag: float, m: int) -> tuple[float, int, float]:
        reach = self.reach_tolerance if self.reach_tolerance is not None \
            else 1e-9 * diag
        max_events = self.max_events if self.max_events is not None \
            else 10 * m + 64
        if reach <= 0 or max_events <= 0 or self.descent_tolerance <= 0:
            raise ValueError("trace tolerances must be positive")
        return reach, max_events, self.descent_tolerance


FREE = "free"
ON_FACET = "facet"
ON_EDGE = "edge"


@dataclass
class AttractionPath:
    """Waypoints plus per-segment feature tags and the terminal status."""

    waypoints: list[tuple]
    segments: list[tuple]          # (kind, feature_id) per waypoint pair
    reached: bool
    dead_point: Optional[tuple]
    beacon: tuple
    events: int = 0
    tie_events: int = 0

    def __post_init__(self):
        if len(self.segments) != max(0, len(self.waypoints) - 1):
            raise TraceError("segment/waypoint count mismatch")
        b = np.asarray(self.beacon, dtype=float)
        dists = [float(np.linalg.norm(np.asarray(w) - b)) for w in self.waypoints]
        slack = 1e-9 * (1.0 + max(dists, default=0.0))
        for previous, current in zip(dists, dists[1:]):
            if current > previous + slack:
                raise TraceError(
                    f"distance to beacon increased along path: {previous} -> {current}")
        for (kind1, _), (kind2, _) in zip(self.segments, self.segments[1:]):
            if kind1 == FREE and kind2 == FREE:
                raise TraceError("two consecutive free segments")

    @property
    def terminal(self) -> tuple:
        return self.waypoints[-1] if self.waypoints else self.beacon

    def to_json_dict(self) -> dict:
        return {
            "waypoints": [list(map(float, w)) for w in self.waypoints],
            "segments": [{"kind": k, "feature": _feature_json(f)}
                         for k, f in self.segments],
            "terminal": {
                "status": "reached" if self.reached else "stuck",
                "point": list(map(float, self.terminal)),
            },
            "events": self.events,
            "tieEvents": self.tie_events,
        }


def _feature_json(f):
    if f is None:
        return None
    if isinstance(f, tuple):
        return list(f)
    return f


def _unit(v: Vec) -> Vec:
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise TraceError("zero direction")
    return v / n


# ---------------------------------------------------------------------------
# 3D region
# ---------------------------------------------------------------------------


class Region3:
    """Floating-point mirror of a tetrahedral decomposition for tracing."""

    def __init__(self, d: TetDecomposition):
        self.decomposition = d
        self.verts = np.array([p.to_floats() for p in d.vertices], dtype=float)
        self.tets = np.array([t.v for t in d.tets], dtype=np.int64)
        self.m = d.m
        lo = self.verts.min(axis=0)
        hi = self.verts.max(axis=0)
        self.diag = float(np.linalg.norm(hi - lo)) or 1.0

        m = self.m
        self.planes = np.zeros((m, 4, 4), dtype=float)
        for i in range(m):
            quad = self.tets[i]
            for j in range(4):
                tri = [quad[k] for k in range(4) if k != j]
                p0, p1, p2 = (self.verts[t] for t in tri)
                n = np.cross(p1 - p0, p2 - p0)
                n = _unit(n)
                c = -float(n @ p0)
                if float(n @ self.verts[quad[j]]) + c < 0:
                    n, c = -n, -c
                self.planes[i, j, :3] = n
                self.planes[i, j, 3] = c

        owners: dict[tuple, list[tuple[int, int]]] = {}
        for i in range(m):
            quad = self.tets[i]
            for j in range(4):
                tri = tuple(sorted(int(quad[k]) for k in range(4) if k != j))
                owners.setdefault(tri, []).append((i, j))
        self.neighbors = -np.ones((m, 4), dtype=np.int64)
        self.boundary: list[dict] = []
        self.bf_of: dict[tuple[int, int], int] = {}
        for tri, occ in owners.items():
            if len(occ) == 2:
                (t1, j1), (t2, j2) = occ
                self.neighbors[t1, j1] = t2
                self.neighbors[t2, j2] = t1
            elif len(occ) == 1:
                t1, j1 = occ[0]
                bf_id = len(self.boundary)
                self.boundary.append({
                    "tet": t1, "slot": j1, "verts": tri,
                    "coords": self.verts[list(tri)].copy(),
                    "normal": self.planes[t1, j1, :3].copy(),
                    "offset": float(self.planes[t1, j1, 3]),
                })
                self.bf_of[(t1, j1)] = bf_id

        self.edge_bfs: dict[tuple[int, int], list[int]] = {}
        self.vertex_bfs: dict[int, list[int]] = {}
        for bf_id, bf in enumerate(self.boundary):
            a, b, c = bf["verts"]
            for e in ((a, b), (a, c), (b, c)):
                self.edge_bfs.setdefault(e, []).append(bf_id)
            for v in bf["verts"]:
                self.vertex_bfs.setdefault(v, []).append(bf_id)
        self.vertex_tets: dict[int, list[int]] = {}
        for i in range(m):
            for v in self.tets[i]:
                self.vertex_tets.setdefault(int(v), []).append(i)
        self.edge_tets: dict[tuple[int, int], list[int]] = {}
        for e in self.edge_bfs:
            u, w = e
            self.edge_tets[e] = [i for i in self.vertex_tets.get(u, [])
                                 if w in self.tets[i]]

    # -- queries ---------------------------------------------------------

    def min_slack(self, i: int, x: Vec) -> float:
        s = self.planes[i, :, :3] @ x + self.planes[i, :, 3]
        return float(s.min())

    def contains(self, x: Vec, tol: float) -> bool:
        return any(self.min_slack(i, x) >= -tol for i in range(self.m))

    def locate(self, x: Vec):
        """Classify a point: ('interior', tet) or a boundary feature."""
        tol = 1e-9 * self.diag
        containing = [i for i in range(self.m) if self.min_slack(i, x) >= -tol]
        if not containing:
            raise RegionError(f"point {tuple(x)} is outside the region")
        best = max(containing, key=lambda i: self.min_slack(i, x))
        for i in containing:
            for v in self.tets[i]:
                if np.linalg.norm(self.verts[v] - x) <= tol:
                    return ("vertex", int(v))
        candidate_edges = set()
        for i in containing:
            quad = [int(v) for v in self.tets[i]]
            for a in range(4):
                for b in range(a + 1, 4):
                    e = tuple(sorted((quad[a], quad[b])))
                    if e in self.edge_bfs:
                        candidate_edges.add(e)
        for e in sorted(candidate_edges):
            if _point_segment_distance(x, self.verts[e[0]], self.verts[e[1]]) <= tol:
                return ("edge", e)
        for i in containing:
            for j in range(4):
                bf_id = self.bf_of.get((i, j))
                if bf_id is None:
                    continue
                s = float(self.planes[i, j, :3] @ x + self.planes[i, j, 3])
                if abs(s) <= tol:
                    return ("facet", bf_id)
        return ("interior", best)

    def tets_at(self, feature) -> list[int]:
        kind, data = feature
        if kind == "interior":
            return [data]
        if kind == "facet":
            return [self.boundary[data]["tet"]]
        if kind == "edge":
            return self.edge_tets.get(data, [])
        if kind == "vertex":
            return self.vertex_tets.get(data, [])
        raise TraceError(f"unknown feature {feature}")

    def facets_at(self, feature) -> list[int]:
        kind, data = feature
        if kind == "facet":
            return [data]
        if kind == "edge":
            return list(self.edge_bfs.get(data, []))
        if kind == "vertex":
            return list(self.vertex_bfs.get(data, []))
        return []

    def edges_at(self, feature) -> list[tuple[int, int]]:
        kind, data = feature
        if kind == "edge":
            return [data]
        if kind == "vertex":
            return sorted(e for e in self.edge_bfs if data in e)
        return []

    def admits(self, feature, x: Vec, u: Vec, tol_on: float, tol_dir: float) -> Optional[int]:
        """A tetrahedron whose cone at x strictly admits direction u."""
        for i in self.tets_at(feature):
            s = self.planes[i, :, :3] @ x + self.planes[i, :, 3]
            dn = self.planes[i, :, :3] @ u
            if all(dn[j] > tol_dir for j in range(4) if s[j] <= tol_on):
                return i
        return None

    def cell_walk(self, tet: int, x: Vec, b: Vec, tol_on: float):
        """Advance along the ray x -> b; returns (point, hit, travel).

        ``hit`` is None when the beacon is reached, otherwise the (tet,
        slot) of the boundary facet that stopped the flight.
        """
        u = b - x
        dist = float(np.linalg.norm(u))
        u = u / dist
        t_cur = 0.0
        for _ in range(4 * self.m + 32):
            s = self.planes[tet, :, :3] @ x + self.planes[tet, :, 3]
            dn = self.planes[tet, :, :3] @ u
            t_exit = math.inf
            j_exit = -1
            for j in range(4):
                if dn[j] < -1e-15:
                    t = s[j] / -dn[j]
                    if t < t_cur - tol_on:
                        continue
                    if t < t_exit:
                        t_exit, j_exit = t, j
            if t_exit >= dist - tol_on:
                return b.copy(), None, dist
            nb = int(self.neighbors[tet, j_exit])
            if nb < 0:
                return x + t_exit * u, (tet, j_exit), t_exit
            tet = nb
            t_cur = max(t_cur, t_exit)
        raise TraceError("cell walk exceeded hop limit")

    def classify_on_facet(self, bf_id: int, x: Vec):
        tol = 1e-9 * self.diag
        bf = self.boundary[bf_id]
        tri = bf["verts"]
        for v in tri:
            if np.linalg.norm(self.verts[v] - x) <= tol:
                return ("vertex", int(v))
        for a in range(3):
            for b in range(a + 1, 3):
                e = (tri[a], tri[b])
                if _point_segment_distance(x, self.verts[e[0]], self.verts[e[1]]) <= tol:
                    return ("edge", e)
        return ("facet", bf_id)


def _point_segment_distance(x: Vec, a: Vec, b: Vec) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float((x - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(a + t * ab - x))


def _facet_candidate(region: Region3, bf_id: int, x: Vec, b: Vec,
                     u_hat: Vec, tol_on: float, tol_move: float):
    """Sliding candidate on a boundary facet: direction toward the
    in-plane foot of the beacon, capped at the triangle boundary.

    Returns (rate, cap, direction, lift) or None. ``lift`` marks motion on
    a facet whose plane has the beacon strictly on the inner side; such a
    slide is shortened so the next event can take off into the interior.
    """
    bf = region.boundary[bf_id]
    n, c = bf["normal"], bf["offset"]
    d_b = float(n @ b + c)
    foot = b - d_b * n
    v = foot - x
    vlen = float(np.linalg.norm(v))
    if vlen <= tol_move:
        return None
    v_hat = v / vlen
    rate = float(u_hat @ v_hat)
    if rate <= 0.0:
        return None
    # cap at the first triangle-edge crossing along v
    p0, p1, p2 = bf["coords"]
    basis = np.column_stack((p1 - p0, p2 - p0))
    gram = basis.T @ basis
    try:
        inv = np.linalg.inv(gram)
    except np.linalg.LinAlgError:
        return None
    ab0 = inv @ (basis.T @ (x - p0))
    abv = inv @ (basis.T @ v_hat)
    lam = np.array([1.0 - ab0[0] - ab0[1], ab0[0], ab0[1]])
    dlam = np.array([-abv[0] - abv[1], abv[0], abv[1]])
    cap = vlen
    for k in range(3):
        if dlam[k] < -1e-15:
            t = lam[k] / -dlam[k]
            if t < cap:
                cap = max(t, 0.0)
    if cap <= tol_move:
        return None
    lift = d_b > tol_on
    return rate, cap, v_hat, lift


def _edge_candidate(region: Region3, e: tuple[int, int], x: Vec, b: Vec,
                    u_hat: Vec, tol_move: float):
    a = region.verts[e[0]]
    c = region.verts[e[1]]
    ab = c - a
    denom = float(ab @ ab)
    t = float((b - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    target = a + t * ab
    v = target - x
    vlen = float(np.linalg.norm(v))
    if vlen <= tol_move:
        return None
    v_hat = v / vlen
    rate = float(u_hat @ v_hat)
    if rate <= 0.0:
        return None
    return rate, vlen, v_hat, False


def _trace3(region: Region3, p, b, cfg: TraceConfig) -> AttractionPath:
    reach, max_events, descent_tol = cfg.resolved(region.diag, region.m)
    tol_on = 1e-9 * region.diag
    tol_move = 1e-12 * region.diag
    lift_step = 1e-6 * region.diag

    x = np.asarray(p, dtype=float).copy()
    beacon = np.asarray(b, dtype=float).copy()
    feature = region.locate(x)
    region.locate(beacon)  # raises when the beacon is outside

    waypoints = [tuple(x)]
    segments: list[tuple] = []
    tie_events = 0

    def emit(point: Vec, kind: str, tag):
        nonlocal x
        if np.linalg.norm(point - x) <= tol_move:
            x = point
            return
        if kind == FREE and segments and segments[-1][0] == FREE:
            waypoints[-1] = tuple(point)     # merge collinear free flight
        else:
            waypoints.append(tuple(point))
            segments.append((kind, tag))
        x = point

    for event in range(max_events):
        to_b = beacon - x
        dist = float(np.linalg.norm(to_b))
        if dist <= reach:
            return AttractionPath(waypoints, segments, True, None,
                                  tuple(beacon), event, tie_events)
        u_hat = to_b / dist

        tet = region.admits(feature, x, u_hat, tol_on, descent_tol)
        if tet is not None:
            point, hitinfo, travel = region.cell_walk(tet, x, beacon, tol_on)
            if travel > tol_move:
                if hitinfo is None:
                    emit(point, FREE, None)
                    return AttractionPath(waypoints, segments, True, None,
                                          tuple(beacon), event + 1, tie_events)
                bf_id = region.bf_of[hitinfo]
                emit(point, FREE, None)
                feature = region.classify_on_facet(bf_id, x)
                continue
            # zero-length flight: grazing contact, fall through to sliding

        candidates = []
        for bf_id in region.facets_at(feature):
            cand = _facet_candidate(region, bf_id, x, beacon, u_hat,
                                    tol_on, tol_move)
            if cand:
                rate, cap, v_hat, lift = cand
                candidates.append((rate, 0, ("facet", bf_id), cap, v_hat, lift))
        for e in region.edges_at(feature):
            cand = _edge_candidate(region, e, x, beacon, u_hat, tol_move)
            if cand:
                rate, cap, v_hat, lift = cand
                candidates.append((rate, 1, ("edge", e), cap, v_hat, lift))

        candidates = [c for c in candidates if c[0] > descent_tol]
        if not candidates:
            dead = tuple(x)
            return AttractionPath(waypoints, segments, False, dead,
                                  tuple(beacon), event, tie_events)
        candidates.sort(key=lambda c: (-c[0], c[1], str(c[2])))
        if len(candidates) > 1 and candidates[0][0] - candidates[1][0] <= 1e-9 \
                and candidates[0][2] != candidates[1][2]:
            tie_events += 1
        rate, _, feat, cap, v_hat, lift = candidates[0]
        if lift:
            cap = min(cap, lift_step)
        point = x + cap * v_hat
        if feat[0] == "facet":
            emit(point, ON_FACET, feat[1])
            feature = region.classify_on_facet(feat[1], x)
        else:
            emit(point, ON_EDGE, feat[1])
            e = feat[1]
            tol = 1e-9 * region.diag
            if np.linalg.norm(region.verts[e[0]] - x) <= tol:
                feature = ("vertex", e[0])
            elif np.linalg.norm(region.verts[e[1]] - x) <= tol:
                feature = ("vertex", e[1])
            else:
                feature = ("edge", e)
    raise TraceError(f"trace exceeded {max_events} events")


# ---------------------------------------------------------------------------
# 2D region
# ---------------------------------------------------------------------------


class Polygon2:
    """Simple polygon, counterclockwise vertex loop, for 2D tracing."""

    def __init__(self, vertices: Sequence):
        pts = np.array([[float(v[0]), float(v[1])] for v in vertices], dtype=float)
        if len(pts) < 3:
            raise RegionError("polygon needs at least 3 vertices")
        self.verts = pts
        self.n = len(pts)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        self.diag = float(np.linalg.norm(hi - lo)) or 1.0
        area2 = 0.0
        for i in range(self.n):
            a, b = pts[i], pts[(i + 1) % self.n]
            area2 += float(a[0] * b[1] - b[0] * a[1])
        if area2 <= 0:
            raise RegionError("polygon must be counterclockwise")
        self.normals = np.zeros((self.n, 2))
        self.offsets = np.zeros(self.n)
        for i in range(self.n):
            a, b = pts[i], pts[(i + 1) % self.n]
            e = b - a
            n = _unit(np.array([-e[1], e[0]]))  # interior is left of the edge
            self.normals[i] = n
            self.offsets[i] = -float(n @ a)

    def edge(self, i: int):
        return self.verts[i], self.verts[(i + 1) % self.n]

    def contains(self, x: Vec, tol: float) -> bool:
        for i in range(self.n):
            a, b = self.edge(i)
            if _point_segment_distance2(x, a, b) <= tol:
                return True
        return self._strictly_inside(x)

    def _strictly_inside(self, x: Vec) -> bool:
        inside = False
        for i in range(self.n):
            a, b = self.edge(i)
            if (a[1] > x[1]) != (b[1] > x[1]):
                t = (x[1] - a[1]) / (b[1] - a[1])
                if a[0] + t * (b[0] - a[0]) > x[0]:
                    inside = not inside
        return inside

    def locate(self, x: Vec):
        tol = 1e-9 * self.diag
        for i in range(self.n):
            if np.linalg.norm(self.verts[i] - x) <= tol:
                return ("vertex", i)
        for i in range(self.n):
            a, b = self.edge(i)
            if _point_segment_distance2(x, a, b) <= tol:
                return ("edge", i)
        if self._strictly_inside(x):
            return ("interior", None)
        raise RegionError(f"point {tuple(x)} is outside the polygon")

    def admits(self, feature, x: Vec, u: Vec, tol_dir: float) -> bool:
        kind, data = feature
        if kind == "interior":
            return True
        if kind == "edge":
            return float(self.normals[data] @ u) > tol_dir
        # vertex: wedge between incoming and outgoing edges
        i = data
        prev_v = self.verts[(i - 1) % self.n]
        next_v = self.verts[(i + 1) % self.n]
        v = self.verts[i]
        into = next_v - v
        back = prev_v - v
        turn = _cross2(v - prev_v, into)
        c1 = _cross2(into, u)
        c2 = _cross2(u, back)
        if abs(turn) <= 1e-15 * self.diag * self.diag:
            return float(self.normals[i] @ u) > tol_dir
        if turn > 0:   # convex corner
            return c1 > tol_dir and c2 > tol_dir
        return c1 > tol_dir or c2 > tol_dir   # reflex corner

    def first_hit(self, x: Vec, b: Vec, feature):
        """First boundary crossing of the open segment x -> b."""
        d = b - x
        seg = float(np.linalg.norm(d))
        best_t, best_i = math.inf, -1
        skip_edges = set()
        kind, data = feature
        if kind == "edge":
            skip_edges.add(data)
        elif kind == "vertex":
            skip_edges.update({data % self.n, (data - 1) % self.n})
        for i in range(self.n):
            a, c = self.edge(i)
            e = c - a
            denom = _cross2(d, e)
            if abs(denom) < 1e-18:
                continue
            t = _cross2(a - x, e) / denom
            s = _cross2(a - x, d) / denom
            if -1e-12 <= s <= 1 + 1e-12 and t > 1e-9 and t < best_t:
                if i in skip_edges and t * seg <= 1e-7 * self.diag:
                    continue
                best_t, best_i = t, i
        if best_i < 0 or best_t >= 1.0 - 1e-12:
            return b.copy(), None, seg
        point = x + best_t * d
        return point, best_i, best_t * seg

    def classify_on_edge(self, i: int, x: Vec):
        tol = 1e-9 * self.diag
        if np.linalg.norm(self.verts[i] - x) <= tol:
            return ("vertex", i)
        j = (i + 1) % self.n
        if np.linalg.norm(self.verts[j] - x) <= tol:
            return ("vertex", j)
        return ("edge", i)


def _cross2(a: Vec, b: Vec) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _point_segment_distance2(x: Vec, a: Vec, b: Vec) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float((x - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(a + t * ab - x))


def _edge_candidate2(poly: Polygon2, i: int, x: Vec, b: Vec, u_hat: Vec,
                     tol_on: float, tol_move: float):
    a, c = poly.edge(i)
    ab = c - a
    denom = float(ab @ ab)
    t = float((b - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    target = a + t * ab
    v = target - x
    vlen = float(np.linalg.norm(v))
    if vlen <= tol_move:
        return None
    v_hat = v / vlen
    rate = float(u_hat @ v_hat)
    if rate <= 0.0:
        return None
    d_b = float(poly.normals[i] @ b + poly.offsets[i])
    lift = d_b > tol_on
    return rate, vlen, v_hat, lift


def _trace2(poly: Polygon2, p, b, cfg: TraceConfig) -> AttractionPath:
    reach, max_events, descent_tol = cfg.resolved(poly.diag, poly.n)
    tol_on = 1e-9 * poly.diag
    tol_move = 1e-12 * poly.diag
    lift_step = 1e-6 * poly.diag

    x = np.asarray(p, dtype=float).copy()
    beacon = np.asarray(b, dtype=float).copy()
    feature = poly.locate(x)
    poly.locate(beacon)

    waypoints = [tuple(x)]
    segments: list[tuple] = []
    tie_events = 0

    def emit(point: Vec, kind: str, tag):
        nonlocal x
        if np.linalg.norm(point - x) <= tol_move:
            x = point
            return
        if kind == FREE and segments and segments[-1][0] == FREE:
            waypoints[-1] = tuple(point)
        else:
            waypoints.append(tuple(point))
            segments.append((kind, tag))
        x = point

    for event in range(max_events):
        to_b = beacon - x
        dist = float(np.linalg.norm(to_b))
        if dist <= reach:
            return AttractionPath(waypoints, segments, True, None,
                                  tuple(beacon), event, tie_events)
        u_hat = to_b / dist

        if poly.admits(feature, x, u_hat, descent_tol):
            point, hit_edge, travel = poly.first_hit(x, beacon, feature)
            if travel > tol_move:
                if hit_edge is None:
                    emit(point, FREE, None)
                    return AttractionPath(waypoints, segments, True, None,
                                          tuple(beacon), event + 1, tie_events)
                emit(point, FREE, None)
                feature = poly.classify_on_edge(hit_edge, x)
                continue

        kind, data = feature
        edge_ids = [data] if kind == "edge" else \
            [(data - 1) % poly.n, data % poly.n] if kind == "vertex" else []
        candidates = []
        for i in edge_ids:
            cand = _edge_candidate2(poly, i, x, beacon, u_hat, tol_on, tol_move)
            if cand:
                rate, cap, v_hat, lift = cand
                candidates.append((rate, i, cap, v_hat, lift))
        candidates = [c for c in candidates if c[0] > descent_tol]
        if not candidates:
            return AttractionPath(waypoints, segments, False, tuple(x),
                                  tuple(beacon), event, tie_events)
        candidates.sort(key=lambda c: (-c[0], c[1]))
        if len(candidates) > 1 and candidates[0][0] - candidates[1][0] <= 1e-9:
            tie_events += 1
        rate, i, cap, v_hat, lift = candidates[0]
        if lift:
            cap = min(cap, lift_step)
        emit(x + cap * v_hat, ON_EDGE, i)
        feature = poly.classify_on_edge(i, x)
    raise TraceError(f"trace exceeded {max_events} events")


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

RegionLike = Union[TetDecomposition, Region3, Polygon2, Sequence]


def as_region(region: RegionLike):
    """Normalize the region argument; decompositions get a cached mirror."""
    if isinstance(region, (Region3, Polygon2)):
        return region
    if isinstance(region, TetDecomposition):
        cached = getattr(region, "_float_region", None)
        if cached is None:
            cached = Region3(region)
            region._float_region = cached
        return cached
    return Polygon2(region)


def _as_floats(point) -> tuple:
    if hasattr(point, "to_floats"):
        return point.to_floats()
    return tuple(float(c) for c in point)


def attract(p, b, region: RegionLike, cfg: Optional[TraceConfig] = None) -> AttractionPath:
    """Trace the attraction path of p pulled by a beacon at b."""
    cfg = cfg or TraceConfig()
    reg = as_region(region)
    p = _as_floats(p)
    b = _as_floats(b)
    if isinstance(reg, Region3):
        return _trace3(reg, p, b, cfg)
    return _trace2(reg, p[:2], b[:2], cfg)


def covers(b, p, region: RegionLike, cfg: Optional[TraceConfig] = None) -> bool:
    """True when the beacon at b attracts p all the way to itself."""
    return attract(p, b, region, cfg).reached
