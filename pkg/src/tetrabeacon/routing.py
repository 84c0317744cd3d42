"""Beacon-based routability checks.

A point p routes to q via beacons b_1..b_k = q when b_1 covers p and each
b_{i+1} covers b_{i}; only one beacon is active at a time, and the target
itself acts as the final beacon. The coverage graph holds these directed
edges; routing queries are reachability searches, and chains are shortest
by activation count.

Coverage checks go through a cache so all-pairs verification costs one
attraction trace per (point, beacon) pair instead of per routing query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .attraction import RegionLike, TraceConfig, as_region, attract, _as_floats
from .decomposition import TetDecomposition


@dataclass
class RouteResult:
    routable: bool
    chain: list[tuple] = field(default_factory=list)

    def activation_count(self) -> int:
        return len(self.chain)


class CoverageCache:
    """Memoized covers(beacon, point) queries against one region."""

    def __init__(self, region: RegionLike, cfg: Optional[TraceConfig] = None):
        self.region = as_region(region)
        self.cfg = cfg or TraceConfig()
        self._memo: dict[tuple, bool] = {}
        self.traces = 0

    def covers(self, beacon, point) -> bool:
        key = (_as_floats(beacon), _as_floats(point))
        hit = self._memo.get(key)
        if hit is None:
            self.traces += 1
            hit = attract(key[1], key[0], self.region, self.cfg).reached
            self._memo[key] = hit
        return hit


@dataclass
class CoverageGraph:
    """Directed coverage edges over a source, beacons, and a target.

    Edge u -> v means the beacon at v covers the point at u. Node 0 is the
    source, nodes 1..k the beacons, node k+1 the target.
    """

    points: list[tuple]
    edges: set[tuple[int, int]]

    @property
    def source(self) -> int:
        return 0

    @property
    def target(self) -> int:
        return len(self.points) - 1

    def shortest_chain(self) -> Optional[list[int]]:
        """Fewest-activations path source -> target, as node indices."""
        from collections import deque

        parent: dict[int, int] = {self.source: -1}
        queue = deque([self.source])
        while queue:
            u = queue.popleft()
            if u == self.target:
                chain = []
                while u != -1:
                    chain.append(u)
                    u = parent[u]
                return chain[::-1]
            for (a, v) in self.edges:
                if a == u and v not in parent:
                    parent[v] = u
                    queue.append(v)
        return None


def build_coverage_graph(p, q, beacons: Sequence, region: RegionLike,
                         cache: Optional[CoverageCache] = None,
                         cfg: Optional[TraceConfig] = None) -> CoverageGraph:
    cache = cache or CoverageCache(region, cfg)
    points = [_as_floats(p)] + [_as_floats(b) for b in beacons] + [_as_floats(q)]
    k = len(beacons)
    edges: set[tuple[int, int]] = set()
    for j in range(1, k + 2):          # beacons and the target can activate
        for i in range(0, k + 1):      # source and beacons can be pulled
            if i == j:
                continue
            if cache.covers(points[j], points[i]):
                edges.add((i, j))
    return CoverageGraph(points, edges)


def route(p, q, beacons: Sequence, region: RegionLike,
          cfg: Optional[TraceConfig] = None,
          cache: Optional[CoverageCache] = None) -> RouteResult:
    """Route p to q through a beacon set; the chain ends with q itself.

    Identical endpoints route with an empty chain. The returned chain is
    a shortest activation sequence (beacon points, final element q).
    """
    pf, qf = _as_floats(p), _as_floats(q)
    if pf == qf:
        return RouteResult(True, [])
    graph = build_coverage_graph(pf, qf, beacons, region, cache, cfg)
    chain = graph.shortest_chain()
    if chain is None:
        return RouteResult(False, [])
    return RouteResult(True, [graph.points[i] for i in chain[1:]])


@dataclass
class PairFailure:
    source: tuple
    target: tuple


@dataclass
class VerificationReport:
    pairs_checked: int
    failures: list[PairFailure]
    samples: int
    beacons: int
    traces: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "pairsChecked": self.pairs_checked,
            "samples": self.samples,
            "beacons": self.beacons,
            "traces": self.traces,
            "ok": self.ok,
            "failures": [{"from": list(f.source), "to": list(f.target)}
                         for f in self.failures],
        }


def sample_points(d: TetDecomposition, extra: int = 0, seed: int = 0) -> list[tuple]:
    """Vertices plus tetrahedron centroids, plus optional seeded interior
    points (barycentric draws bounded away from the facets)."""
    import random

    pts = [v.to_floats() for v in d.vertices]
    pts += [d.centroid(i).to_floats() for i in range(d.m)]
    if extra > 0:
        rng = random.Random(seed)
        reg = as_region(d)
        for _ in range(extra):
            i = rng.randrange(d.m)
            w = [0.05 + rng.random() for _ in range(4)]
            s = sum(w)
            corners = reg.verts[reg.tets[i]]
            pts.append(tuple(
                sum(w[j] * corners[j][axis] for j in range(4)) / s
                for axis in range(3)))
    return pts


def verify_all_pairs(d: TetDecomposition, beacons: Sequence,
                     cfg: Optional[TraceConfig] = None,
                     extra_samples: int = 0, seed: int = 0) -> VerificationReport:
    """Check route(p, q) for every ordered pair of sample points.

    Sample set: all vertices and all centroids (criterion surface), plus
    optional extra seeded interior points. Coverage traces are shared
    across pairs through one cache.
    """
    cache = CoverageCache(d, cfg)
    samples = sample_points(d, extra_samples, seed)
    beacon_pts = [_as_floats(b) for b in beacons]
    k = len(beacon_pts)

    # point -> beacon and beacon -> beacon coverage, computed once
    into_beacon: dict[tuple[int, int], bool] = {}
    for si, s in enumerate(samples):
        for bi, b in enumerate(beacon_pts):
            into_beacon[(si, bi)] = (s == b) or cache.covers(b, s)
    beacon_to_beacon: dict[tuple[int, int], bool] = {}
    for i, bi in enumerate(beacon_pts):
        for j, bj in enumerate(beacon_pts):
            if i != j:
                beacon_to_beacon[(i, j)] = cache.covers(bj, bi)
    # beacon reachability closure (beacon -> beacon chains)
    reach = [[i == j or beacon_to_beacon.get((i, j), False)
              for j in range(k)] for i in range(k)]
    for mid in range(k):
        for i in range(k):
            if reach[i][mid]:
                row_mid = reach[mid]
                row_i = reach[i]
                for j in range(k):
                    if row_mid[j]:
                        row_i[j] = True
    # beacon -> sample coverage (sample acting as terminal beacon)
    out_of_beacon: dict[tuple[int, int], bool] = {}
    for bi, b in enumerate(beacon_pts):
        for si, s in enumerate(samples):
            out_of_beacon[(bi, si)] = (s == b) or cache.covers(s, b)

    failures: list[PairFailure] = []
    pairs = 0
    for pi, p in enumerate(samples):
        for qi, q in enumerate(samples):
            if pi == qi:
                continue
            pairs += 1
            if p == q:
                continue
            ok = cache.covers(q, p)  # direct pull, no beacon
            if not ok:
                for b1 in range(k):
                    if not into_beacon[(pi, b1)]:
                        continue
                    for b2 in range(k):
                        if reach[b1][b2] and out_of_beacon[(b2, qi)]:
                            ok = True
                            break
                    if ok:
                        break
            if not ok:
                failures.append(PairFailure(p, q))
    return VerificationReport(pairs, failures, len(samples), k,
                              traces=cache.traces)


@dataclass
class FalsificationReport:
    corners: int
    budget: int
    candidates: int
    subsets_checked: int
    counterexample: Optional[list[tuple]]

    @property
    def ok(self) -> bool:
        """True when no sub-budget beacon subset routes start to target."""
        return self.counterexample is None

    def to_json_dict(self) -> dict:
        return {
            "corners": self.corners,
            "budget": self.budget,
            "candidates": self.candidates,
            "subsetsChecked": self.subsets_checked,
            "ok": self.ok,
            "counterexample": None if self.counterexample is None
            else [list(b) for b in self.counterexample],
        }


MAX_CANDIDATES = 128
MAX_SUBSETS = 2_000_000


def falsify_lower_bound(c: int, beacon_budget: int, grid: int,
                        delta=None, cfg: Optional[TraceConfig] = None) -> FalsificationReport:
    """Exhaustively confirm that fewer beacons than corners cannot route
    start to target in the c-corner spiral polyhedron.

    Candidates are all decomposition vertices plus ``grid`` interior
    samples per hallway (spread across its three tetrahedra). Every
    subset of size ``beacon_budget`` is checked through the coverage
    graph; a found routing subset is reported as a counterexample, which
    would contradict the sharpness construction and should be treated as
    a tracer bug first.
    """
    from fractions import Fraction

    from .generators import SpiralParams, spiral_polyhedron

    params = SpiralParams(c, Fraction(delta) if delta is not None else Fraction(2, 5))
    d = spiral_polyhedron(params)
    reg = as_region(d)
    s = d.vertices[0].to_floats()
    t = d.vertices[1].to_floats()

    candidates: list[tuple] = [v.to_floats() for v in d.vertices]
    weights = [(0.4, 0.3, 0.2, 0.1), (0.1, 0.4, 0.3, 0.2), (0.2, 0.1, 0.4, 0.3),
               (0.3, 0.2, 0.1, 0.4), (0.25, 0.25, 0.25, 0.25)]
    for hallway in range(c - 1):
        tets = [1 + 3 * hallway, 2 + 3 * hallway, 3 + 3 * hallway]
        for g in range(grid):
            tet = tets[g % 3]
            w = weights[(g // 3) % len(weights)]
            corners = reg.verts[reg.tets[tet]]
            candidates.append(tuple(
                sum(w[j] * corners[j][axis] for j in range(4))
                for axis in range(3)))
    if len(candidates) > MAX_CANDIDATES:
        raise ValueError(f"{len(candidates)} candidates exceed cap {MAX_CANDIDATES}")

    n = len(candidates)
    if beacon_budget > 0:
        from math import comb
        if comb(n, beacon_budget) > MAX_SUBSETS:
            raise ValueError("subset enumeration would exceed the cap")

    cache = CoverageCache(d, cfg)
    if beacon_budget == 0:
        routable = cache.covers(t, s)
        return FalsificationReport(c, 0, n, 1,
                                   [] if routable else None)

    # precompute coverage among s, candidates, t once
    s_to_cand = [cache.covers(cand, s) for cand in candidates]
    cand_to_t = [cache.covers(t, cand) for cand in candidates]
    cand_to_cand = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                cand_to_cand[i][j] = cache.covers(candidates[j], candidates[i])

    subsets = 0
    for subset in combinations(range(n), beacon_budget):
        subsets += 1
        # BFS from s over the subset, then the hop to t
        seen = set()
        frontier = [i for i in subset if s_to_cand[i]]
        seen.update(frontier)
        routed = False
        while frontier and not routed:
            nxt = []
            for i in frontier:
                if cand_to_t[i]:
                    routed = True
                    break
                for j in subset:
                    if j not in seen and cand_to_cand[i][j]:
                        seen.add(j)
                        nxt.append(j)
            frontier = nxt
        if routed:
            return FalsificationReport(c, beacon_budget, n, subsets,
                                       [candidates[i] for i in subset])
    return FalsificationReport(c, beacon_budget, n, subsets, None)
