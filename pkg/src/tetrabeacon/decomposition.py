"""Tetrahedral decompositions: loading-side model, validation, dual graph,
leaf-rooted spanning trees and shared-feature queries.

A decomposition is a vertex table plus a list of tetrahedra whose union is
the polyhedron. Two tetrahedra are dual-adjacent exactly when they share a
triangular facet (by vertex indices); a valid decomposition has facets
shared by at most two tetrahedra, pairwise disjoint interiors and a
connected dual graph.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import (
    Containment,
    FeatureKind,
    GeometryError,
    Point3,
    SharedFeature,
    Tetrahedron,
    bounding_box,
    boxes_overlap,
    orient3d,
    shared_feature,
    tet_interiors_disjoint,
)


class DecompositionError(ValueError):
    """Raised when an operation requires a valid decomposition and the
    input is not one, or when a structural precondition fails."""


def _exact_quarter(s):
    """s/4 staying exact: ints are promoted to Fraction first."""
    if isinstance(s, int):
        s = Fraction(s)
    return s / 4


@dataclass
class TetDecomposition:
    """Vertex table + tetrahedron list; the polyhedron is their union.

    Tetrahedra are orientation-normalized on construction (positive
    volume); degenerate ones are left as-is for the validator to report.
    """

    vertices: list[Point3]
    tets: list[Tetrahedron]
    label: str = ""

    def __post_init__(self):
        self.vertices = [Point3(*v) for v in self.vertices]
        normalized = []
        for t in self.tets:
            t = t if isinstance(t, Tetrahedron) else Tetrahedron(tuple(t))
            if all(0 <= i < len(self.vertices) for i in t.v):
                a, b, c, d = (self.vertices[i] for i in t.v)
                if orient3d(a, b, c, d) < 0:
                    t = Tetrahedron((t.v[0], t.v[1], t.v[3], t.v[2]))
            normalized.append(t)
        self.tets = normalized

    @property
    def m(self) -> int:
        return len(self.tets)

    def tet_points(self, i: int) -> list[Point3]:
        return [self.vertices[j] for j in self.tets[i].v]

    def centroid(self, i: int) -> Point3:
        pts = self.tet_points(i)
        return Point3(_exact_quarter(sum(p.x for p in pts)),
                      _exact_quarter(sum(p.y for p in pts)),
                      _exact_quarter(sum(p.z for p in pts)))

    def facet_owners(self) -> dict[tuple[int, int, int], list[int]]:
        """Map each facet (sorted index triple) to the tets containing it.

        Tetrahedra with repeated indices have no facets here; the
        validator reports them separately.
        """
        owners: dict[tuple[int, int, int], list[int]] = defaultdict(list)
        for i, t in enumerate(self.tets):
            if not t.well_formed():
                continue
            for f in t.facets():
                owners[f].append(i)
        return owners

    def boundary_facets(self) -> list[tuple[int, tuple[int, int, int]]]:
        """Facets contained in exactly one tetrahedron, as (tet, facet)."""
        return [(tets[0], f) for f, tets in self.facet_owners().items()
                if len(tets) == 1]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    def add(self, message: str):
        self.violations.append(message)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


def validate(d: TetDecomposition) -> ValidationReport:
    """Check every structural invariant; an empty report means valid."""
    report = ValidationReport()
    if not d.tets:
        report.add("decomposition has no tetrahedra")
        return report

    n = len(d.vertices)
    index_ok = [True] * d.m
    for i, t in enumerate(d.tets):
        bad = [j for j in t.v if not 0 <= j < n]
        if bad:
            report.add(f"tet {i} references out-of-range vertex indices {bad}")
            index_ok[i] = False
    if not all(index_ok):
        return report

    seen_coords: dict[tuple, int] = {}
    for i, p in enumerate(d.vertices):
        key = (p.x, p.y, p.z)
        if key in seen_coords:
            report.add(f"vertices {seen_coords[key]} and {i} have identical "
                       f"coordinates under distinct indices")
        else:
            seen_coords[key] = i

    degenerate = [False] * d.m
    for i, t in enumerate(d.tets):
        if not t.well_formed():
            report.add(f"tet {i} is degenerate (repeated vertex index)")
            degenerate[i] = True
            continue
        a, b, c, dd = d.tet_points(i)
        if orient3d(a, b, c, dd) == 0:
            report.add(f"tet {i} is degenerate (zero volume)")
            degenerate[i] = True

    seen_tets: dict[frozenset, int] = {}
    for i, t in enumerate(d.tets):
        key = t.index_set()
        if key in seen_tets:
            report.add(f"tets {seen_tets[key]} and {i} are duplicates")
        else:
            seen_tets[key] = i

    for f, owners in d.facet_owners().items():
        if len(owners) > 2:
            report.add(f"facet {f} is shared by {len(owners)} tets {owners} "
                       f"(at most 2 allowed)")

    # Pairwise interior overlap, exact separating-axis test with an exact
    # bounding-box prefilter. O(m^2) is fine at desk scale.
    boxes = [bounding_box(d.tet_points(i)) for i in range(d.m)]
    for i in range(d.m):
        if degenerate[i]:
            continue
        for j in range(i + 1, d.m):
            if degenerate[j]:
                continue
            if not boxes_overlap(boxes[i], boxes[j]):
                continue
            if not tet_interiors_disjoint(d.tet_points(i), d.tet_points(j)):
                report.add(f"tets {i} and {j} have overlapping interiors")

    if not degenerate.count(True):
        g = dual_graph(d, checked=False)
        if not g.is_connected():
            report.add("dual graph is disconnected")
    return report


@dataclass
class DualGraph:
    """Facet-adjacency graph: nodes are tetrahedron indices in list order."""

    n: int
    adjacency: list[list[int]]
    shared_facets: dict[tuple[int, int], tuple[int, int, int]]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.shared_facets.keys())

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def max_degree(self) -> int:
        return max(self.degree(i) for i in range(self.n))

    def is_connected(self, nodes: Optional[Iterable[int]] = None) -> bool:
        """Connectivity of the graph (or of an induced node subset)."""
        allowed = set(range(self.n)) if nodes is None else set(nodes)
        if not allowed:
            return False
        start = min(allowed)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in self.adjacency[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == allowed

    def to_dot(self) -> str:
        lines = ["graph dual {"]
        for i in range(self.n):
            lines.append(f"  t{i};")
        for i, j in self.edges():
            lines.append(f"  t{i} -- t{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {"nodes": self.n, "edges": [list(e) for e in self.edges()]}


def dual_graph(d: TetDecomposition, checked: bool = True) -> DualGraph:
    """Build the facet-adjacency graph of a decomposition.

    With ``checked`` (the default) a facet owned by more than two tets
    raises, since the result would not be the dual graph of anything valid.
    """
    adjacency: list[list[int]] = [[] for _ in range(d.m)]
    shared: dict[tuple[int, int], tuple[int, int, int]] = {}
    for f, owners in d.facet_owners().items():
        if len(owners) == 2:
            i, j = sorted(owners)
            adjacency[i].append(j)
            adjacency[j].append(i)
            shared[(i, j)] = f
        elif len(owners) > 2 and checked:
            raise DecompositionError(
                f"facet {f} shared by {len(owners)} tets; run validate()")
    for neighbors in adjacency:
        neighbors.sort()
    return DualGraph(d.m, adjacency, shared)


@dataclass
class SpanningTree:
    """A spanning tree of the dual graph, rooted at a leaf of the tree.

    ``nodes`` are the (global) tetrahedron indices the tree spans; parent
    and children express the rooted structure. Children lists are kept in
    ascending order so traversals are deterministic.
    """

    root: int
    parent: dict[int, Optional[int]]
    children: dict[int, list[int]]

    @property
    def nodes(self) -> list[int]:
        return sorted(self.parent.keys())

    def tree_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted((u, p))) for u, p in self.parent.items()
                      if p is not None)

    def depth(self, u: int) -> int:
        k = 0
        while self.parent[u] is not None:
            u = self.parent[u]
            k += 1
        return k

    def tree_degree(self, u: int) -> int:
        return len(self.children[u]) + (0 if self.parent[u] is None else 1)

    def is_leaf(self, u: int) -> bool:
        return self.tree_degree(u) <= 1

    def leaves(self) -> list[int]:
        return sorted(u for u in self.parent if self.is_leaf(u))

    def subtree(self, u: int) -> list[int]:
        out = []
        stack = [u]
        while stack:
            w = stack.pop()
            out.append(w)
            stack.extend(self.children[w])
        return sorted(out)


def leaf_rooted_spanning_tree(g: DualGraph,
                              nodes: Optional[Iterable[int]] = None,
                              seed: int = 0) -> SpanningTree:
    """DFS spanning tree of (an induced subgraph of) the dual graph,
    re-rooted at its lowest-index tree leaf.

    ``seed`` is a deterministic tie-break key: it rotates the DFS start
    node and neighbor ordering, yielding other valid trees. The final
    re-rooting rule (smallest tree leaf) does not depend on the seed.
    """
    allowed = sorted(range(g.n) if nodes is None else set(nodes))
    if not allowed:
        raise DecompositionError("empty node set")
    if not g.is_connected(allowed):
        raise DecompositionError("dual graph (or induced subset) is disconnected")

    k = len(allowed)
    allowed_set = set(allowed)
    position = {u: i for i, u in enumerate(allowed)}

    def order_key(u):
        return ((position[u] + seed) % k, u) if seed else (u,)

    start = min(allowed, key=order_key)
    parent: dict[int, Optional[int]] = {start: None}
    stack = [start]
    while stack:
        u = stack.pop()
        neighbors = [w for w in g.adjacency[u] if w in allowed_set]
        # reversed so the smallest-key neighbor is explored first
        for w in sorted(neighbors, key=order_key, reverse=True):
            if w not in parent:
                parent[w] = u
                stack.append(w)

    # undirected tree adjacency, then re-root at the smallest leaf
    tree_adj: dict[int, list[int]] = {u: [] for u in allowed}
    for u, p in parent.items():
        if p is not None:
            tree_adj[u].append(p)
            tree_adj[p].append(u)
    if k == 1:
        return SpanningTree(start, {start: None}, {start: []})
    root = min(u for u in allowed if len(tree_adj[u]) == 1)
    new_parent: dict[int, Optional[int]] = {root: None}
    children: dict[int, list[int]] = {u: [] for u in allowed}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for w in sorted(tree_adj[u]):
            if w not in new_parent:
                new_parent[w] = u
                children[u].append(w)
                queue.append(w)
    return SpanningTree(root, new_parent, children)


def shared_feature_of_set(d: TetDecomposition, nodes: Sequence[int],
                          g: Optional[DualGraph] = None) -> SharedFeature:
    """Common vertex indices of a connected set of 2 to 4 tetrahedra.

    For connected sets the intersection is guaranteed nonempty: size 2
    shares a facet, size 3 an edge, size 4 at least a vertex. An empty
    intersection therefore signals an invalid decomposition.
    """
    nodes = sorted(set(nodes))
    if not 2 <= len(nodes) <= 4:
        raise DecompositionError(f"set size {len(nodes)} outside 2..4")
    if g is None:
        g = dual_graph(d)
    if not g.is_connected(nodes):
        raise DecompositionError(f"node set {nodes} is not connected in the dual graph")

    common = set(d.tets[nodes[0]].index_set())
    for i in nodes[1:]:
        common &= d.tets[i].index_set()
    required = {2: 3, 3: 2, 4: 1}[len(nodes)]
    if len(common) < required:
        raise DecompositionError(
            f"connected set {nodes} shares only {sorted(common)}; "
            f"expected >= {required} common vertices (invalid decomposition)")
    indices = tuple(sorted(common))
    kind = {3: FeatureKind.FACET, 2: FeatureKind.EDGE, 1: FeatureKind.VERTEX}[
        min(len(indices), 3)]
    return SharedFeature(kind, indices)


def connected_subsets(g: DualGraph, size: int,
                      nodes: Optional[Iterable[int]] = None) -> list[tuple[int, ...]]:
    """All connected induced node subsets of a given size (2..4 intended).

    Enumeration grows each subset only through neighbors of its members,
    anchored at its minimum node to avoid duplicates.
    """
    allowed = set(range(g.n) if nodes is None else nodes)
    results: set[tuple[int, ...]] = set()

    def grow(current: set[int], frontier: set[int], anchor: int):
        if len(current) == size:
            results.add(tuple(sorted(current)))
            return
        for w in sorted(frontier):
            if w <= anchor or w in current:
                continue
            new_frontier = (frontier | {x for x in g.adjacency[w] if x in allowed}) - {w}
            grow(current | {w}, new_frontier, anchor)

    for v in sorted(allowed):
        grow({v}, {x for x in g.adjacency[v] if x in allowed}, v)
    return sorted(results)
