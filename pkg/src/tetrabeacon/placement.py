"""Constructive beacon placement with a per-step certificate.

The algorithm peels a leaf-rooted spanning tree of the dual graph from the
deepest leaves upward. Every step places k beacons at decomposition
vertices and removes at least 3k tetrahedra, each containing a beacon,
while keeping the remaining tree connected and (unless the step empties
the decomposition) leaving a remaining tetrahedron that contains one of
the step's beacons. Summed up this certifies that floor((m+1)/3) beacons
suffice for routing.

Steps come in three flavors:

* base: at most four tetrahedra remain; they share a common vertex (one
  tetrahedron needs no beacon at all) and everything is removed.
* step1: one beacon suffices locally. Five structural conditions around
  the selected deepest leaf, each prescribing the beacon vertex via a
  shared feature of a connected four-set (or of three-tet chains) and the
  three or four tetrahedra to remove.
* step2: the one local shape step1 cannot handle (a depth-3 double chain
  under a rear tetrahedron). A bounded, fully verified search places
  k >= 2 beacons; every returned step is checked against the certificate
  invariants, so correctness never rests on case analysis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .decomposition import (
    DecompositionError,
    DualGraph,
    SpanningTree,
    TetDecomposition,
    dual_graph,
    leaf_rooted_spanning_tree,
    shared_feature_of_set,
)


def budget(m: int) -> int:
    """Beacon budget floor((m+1)/3) for a decomposition of m tetrahedra."""
    if m < 1:
        raise ValueError(f"tetrahedron count must be >= 1, got {m}")
    return (m + 1) // 3


@dataclass(frozen=True)
class PlacementStep:
    """One round of the placement loop.

    ``beacons`` are vertex indices, ``removed`` tetrahedron indices;
    ``anchor`` is a remaining tetrahedron containing one of the step's
    beacons (None only when the step removes everything that was left).
    """

    beacons: tuple[int, ...]
    removed: tuple[int, ...]
    anchor: Optional[int]
    rule: str


@dataclass
class BeaconPlacement:
    """Ordered steps plus the deduplicated beacon set and its budget."""

    m: int
    steps: list[PlacementStep]
    seed: int = 0

    @property
    def beacons(self) -> list[int]:
        seen: list[int] = []
        for step in self.steps:
            for b in step.beacons:
                if b not in seen:
                    seen.append(b)
        return seen

    @property
    def budget(self) -> int:
        return budget(self.m)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "budget": self.budget,
            "seed": self.seed,
            "beacons": self.beacons,
            "steps": [
                {"beacons": list(s.beacons), "removed": list(s.removed),
                 "anchor": s.anchor, "rule": s.rule}
                for s in self.steps
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BeaconPlacement":
        steps = [PlacementStep(tuple(s["beacons"]), tuple(s["removed"]),
                               s.get("anchor"), s.get("rule", "?"))
                 for s in data["steps"]]
        return cls(m=data["m"], steps=steps, seed=data.get("seed", 0))

    def summary(self) -> str:
        lines = [f"m={self.m} budget={self.budget} "
                 f"beacons={len(self.beacons)} {self.beacons}"]
        for i, s in enumerate(self.steps):
            anchor = "-" if s.anchor is None else str(s.anchor)
            lines.append(f"  step {i + 1} [{s.rule}]: beacons {list(s.beacons)} "
                         f"removed {list(s.removed)} anchor {anchor}")
        return "\n".join(lines)


def select_deepest_leaf(tree: SpanningTree) -> int:
    """Deepest childless node; ties go to the one whose parent has the
    most children, then to the smallest index."""
    nodes = tree.nodes
    if len(nodes) < 2:
        raise DecompositionError("tree needs at least 2 nodes")
    leaves = [u for u in nodes if not tree.children[u]]
    depths = {u: tree.depth(u) for u in leaves}
    best_depth = max(depths.values())
    deepest = [u for u in leaves if depths[u] == best_depth]
    return min(deepest, key=lambda u: (-len(tree.children[tree.parent[u]]), u))


def place_base_case(d: TetDecomposition, nodes: list[int],
                    g: DualGraph) -> PlacementStep:
    """Remove everything: no beacon for a single tetrahedron, otherwise one
    beacon at a vertex shared by all remaining tetrahedra."""
    nodes = sorted(nodes)
    if not nodes:
        raise DecompositionError("empty decomposition")
    if len(nodes) > 4:
        raise DecompositionError(f"base case needs <= 4 tets, got {len(nodes)}")
    if len(nodes) == 1:
        return PlacementStep((), tuple(nodes), None, "base-single")
    feature = shared_feature_of_set(d, nodes, g)
    return PlacementStep((min(feature.indices),), tuple(nodes), None, "base-shared")


def _common_vertex(d: TetDecomposition, nodes: list[int], g: DualGraph) -> int:
    feature = shared_feature_of_set(d, nodes, g)
    return min(feature.indices)


def place_step1(d: TetDecomposition, tree: SpanningTree, leaf: int,
                g: DualGraph) -> Optional[PlacementStep]:
    """Single-beacon step at the selected deepest leaf, or None when the
    local shape is the double-chain handled by :func:`place_step2`."""
    s1 = leaf
    s2 = tree.parent[s1]
    if s2 is None:
        raise DecompositionError("selected leaf has no parent")
    siblings2 = tree.children[s2]

    if len(siblings2) == 3:
        # (a) three leaf children; keep the parent
        others = [x for x in siblings2 if x != s1]
        if any(tree.children[x] for x in others):
            raise DecompositionError("sibling of a deepest leaf has children")
        v = _common_vertex(d, [s1, s2] + others, g)
        removed = tuple(sorted([s1] + others))
        return PlacementStep((v,), removed, s2, "step1-a")

    if len(siblings2) == 2:
        # (b) two children plus a parent; remove the parent's whole subtree
        other = next(x for x in siblings2 if x != s1)
        if tree.children[other]:
            raise DecompositionError("sibling of a deepest leaf has children")
        s4 = tree.parent[s2]
        if s4 is None:
            raise DecompositionError("unexpected root with two children")
        v = _common_vertex(d, [s1, s2, other, s4], g)
        return PlacementStep((v,), tuple(sorted([s1, s2, other])), s4, "step1-b")

    # s2 has exactly one child (s1)
    s3 = tree.parent[s2]
    if s3 is None:
        raise DecompositionError("chain too short for an inductive step")
    children3 = tree.children[s3]

    if len(children3) == 1:
        # (c) bare chain of three below s4
        s4 = tree.parent[s3]
        if s4 is None:
            raise DecompositionError("chain of three with no parent (m <= 4?)")
        v = _common_vertex(d, [s1, s2, s3, s4], g)
        return PlacementStep((v,), tuple(sorted([s1, s2, s3])), s4, "step1-c")

    leaf_siblings = [x for x in children3 if x != s2 and not tree.children[x]]
    if leaf_siblings:
        # (d) some sibling of s2 is a leaf; remove it with the chain
        s4 = min(leaf_siblings)
        v = _common_vertex(d, [s1, s2, s3, s4], g)
        return PlacementStep((v,), tuple(sorted([s1, s2, s4])), s3, "step1-d")

    # the deepest-leaf selection rule forces every remaining sibling of s2
    # to carry exactly one child, itself a leaf
    branches = []
    for x in sorted(children3):
        kids = tree.children[x]
        if len(kids) != 1 or tree.children[kids[0]]:
            raise DecompositionError(
                f"unexpected sibling shape at node {x}; selection rule violated")
        branches.append((x, kids[0]))

    if len(children3) == 3:
        # (e) three unary branches under s3; two of the three edges shared
        # by (grandchild, child, s3) chains meet in a vertex
        edges = [set(shared_feature_of_set(d, [gc, ch, s3], g).indices)
                 for ch, gc in branches]
        for i, j in ((0, 1), (0, 2), (1, 2)):
            meet = edges[i] & edges[j]
            if meet:
                v = min(meet)
                chi, gci = branches[i]
                chj, gcj = branches[j]
                removed = tuple(sorted([chi, gci, chj, gcj]))
                return PlacementStep((v,), removed, s3, "step1-e")
        raise DecompositionError(
            "three tetrahedron edges of one tetrahedron are pairwise disjoint")

    if len(children3) == 2:
        return None  # the double chain: handled by place_step2
    raise DecompositionError(f"node {s3} has {len(children3)} children")


@dataclass(frozen=True)
class DichotomyCase:
    """Outcome of the six-tetrahedra analysis under a double chain.

    ``shared_vertex``: ``vertex`` is common to the five front tetrahedra.
    ``vertex_plus_edge``: one branch four-set shares ``vertex``, the other
    shares ``edge``, and the two are disjoint; ``vertex_nodes`` and
    ``edge_nodes`` record which four-set is which.
    """

    kind: str
    vertex: int
    edge: Optional[tuple[int, int]] = None
    vertex_nodes: tuple[int, ...] = ()
    edge_nodes: tuple[int, ...] = ()


def dichotomy_5_over_6(d: TetDecomposition, s1: int, s2: int, s3: int,
                       s4: int, s5: int, s6: int,
                       g: Optional[DualGraph] = None) -> DichotomyCase:
    """Classify the double-chain configuration: either the five front
    tetrahedra share a vertex, or one branch shares a vertex and the other
    an edge disjoint from it.

    The six nodes are wired s6-s3, s3-s2-s1, s3-s4-s5 in the dual graph.
    """
    if g is None:
        g = dual_graph(d)
    set_a = [s3, s4, s5, s6]
    set_b = [s1, s2, s3, s6]
    inter_a = set(shared_feature_of_set(d, set_a, g).indices)
    inter_b = set(shared_feature_of_set(d, set_b, g).indices)

    if len(inter_a) >= 2 and len(inter_b) >= 2:
        # both branch edges lie in the facet between s3 and s6, hence meet
        meet = inter_a & inter_b
        if not meet:
            raise DecompositionError(
                "two edges of the rear facet fail to meet (invalid input)")
        return DichotomyCase("shared_vertex", min(meet))

    if len(inter_a) >= 2 or len(inter_b) >= 2:
        if len(inter_a) >= 2:
            edge_set, edge_nodes = inter_a, tuple(set_a)
            vertex_set, vertex_nodes = inter_b, tuple(set_b)
        else:
            edge_set, edge_nodes = inter_b, tuple(set_b)
            vertex_set, vertex_nodes = inter_a, tuple(set_a)
        v = min(vertex_set)
        if v in edge_set:
            return DichotomyCase("shared_vertex", v)
        edge = tuple(sorted(edge_set))[:2]
        return DichotomyCase("vertex_plus_edge", v, edge,
                             vertex_nodes, edge_nodes)

    # both intersections are single vertices: the vertex of s3 off the
    # facet shared with s6 is common to all five front tetrahedra
    facet = d.tets[s3].index_set() & d.tets[s6].index_set()
    off = d.tets[s3].index_set() - facet
    if len(off) != 1:
        raise DecompositionError(
            f"nodes {s3} and {s6} do not share a facet (invalid wiring)")
    v = next(iter(off))
    for node in (s1, s2, s4, s5):
        if v not in d.tets[node].index_set():
            raise DecompositionError(
                f"off-facet vertex {v} missing from node {node} (invalid input)")
    return DichotomyCase("shared_vertex", v)


def _max_removable(tree: SpanningTree, in_tprime: set[int],
                   covered: set[int]) -> set[int]:
    """Largest union of complete subtrees inside T' whose nodes are all
    covered. Removing such a set never disconnects the remaining tree."""
    removable: set[int] = set()

    def visit(u: int) -> bool:
        ok = u in covered
        for w in tree.children[u]:
            child_ok = visit(w)
            ok = ok and child_ok
        if ok and u in in_tprime:
            removable.add(u)
        return ok

    # evaluate from each T'-root downward; T' is itself a subtree, so a
    # single visit from its top covers everything
    top = min(in_tprime, key=lambda u: tree.depth(u))
    visit(top)
    # keep only maximal subtrees: a node whose parent is removable is
    # implied; the set as computed already contains whole subtrees
    return removable


def place_step2(d: TetDecomposition, tree: SpanningTree, leaf: int,
                g: DualGraph) -> PlacementStep:
    """Multi-beacon step for the double-chain shape, by verified search.

    Beacon candidates are the vertices of the subtree rooted at the rear
    tetrahedron (these include every shared-feature vertex and both
    endpoints of the dichotomy edge). The search tries k = 2, 3, ... and
    accepts the first beacon set that covers a removable union of complete
    subtrees of size >= 3k, keeps the beacon co-containment graph
    connected, and leaves an anchor when tetrahedra remain.
    """
    s1 = leaf
    s2 = tree.parent[s1]
    s3 = tree.parent[s2]
    branch = [x for x in tree.children[s3] if x != s2]
    if len(branch) != 1 or len(tree.children[branch[0]]) != 1:
        raise DecompositionError("place_step2 called outside the double-chain shape")
    s4 = branch[0]
    s5 = tree.children[s4][0]
    s6 = tree.parent[s3]
    if s6 is None:
        raise DecompositionError("double chain with no rear tetrahedron")

    case = dichotomy_5_over_6(d, s1, s2, s3, s4, s5, s6, g)

    tprime = tree.subtree(s6)
    in_tprime = set(tprime)
    all_nodes = set(tree.nodes)

    vertex_nodes: dict[int, set[int]] = {}
    for node in all_nodes:
        for v in d.tets[node].v:
            vertex_nodes.setdefault(v, set()).add(node)
    candidates = sorted({v for node in tprime for v in d.tets[node].v},
                        key=lambda v: (-len(vertex_nodes[v] & in_tprime), v))

    def co_contained(u: int, w: int) -> bool:
        return bool(vertex_nodes[u] & vertex_nodes[w])

    def connected_beacons(bs: tuple[int, ...]) -> bool:
        remaining = set(bs[1:])
        frontier = [bs[0]]
        while frontier:
            u = frontier.pop()
            hit = [w for w in remaining if co_contained(u, w)]
            for w in hit:
                remaining.discard(w)
                frontier.append(w)
        return not remaining

    def try_beacons(bs: tuple[int, ...]) -> Optional[PlacementStep]:
        k = len(bs)
        if not connected_beacons(bs):
            return None
        covered = set()
        for b in bs:
            covered |= vertex_nodes[b] & in_tprime
        removable = _max_removable(tree, in_tprime, covered)
        if len(removable) < 3 * k:
            return None
        if removable == all_nodes:
            return PlacementStep(bs, tuple(sorted(removable)), None, "step2")
        anchors = sorted(n for n in all_nodes - removable
                         if any(b in d.tets[n].v for b in bs))
        if anchors:
            return PlacementStep(bs, tuple(sorted(removable)), anchors[0], "step2")
        # every beacon-bearing tetrahedron would be removed: hold one back
        for anchor in sorted(n for n in removable
                             if any(b in d.tets[n].v for b in bs)):
            reduced = _max_removable(tree, in_tprime, covered - {anchor})
            if len(reduced) >= 3 * k:
                return PlacementStep(bs, tuple(sorted(reduced)), anchor, "step2")
        return None

    preferred: list[tuple[int, ...]] = []
    if case.kind == "vertex_plus_edge":
        preferred = [tuple(sorted((case.vertex, e))) for e in case.edge]
    else:
        preferred = [tuple(sorted((case.vertex, w)))
                     for w in candidates if w != case.vertex]

    max_k = max(2, len(tprime) // 3)
    tried: set[tuple[int, ...]] = set()
    for k in range(2, max_k + 1):
        pool = preferred if k == 2 else []
        for bs in pool + [tuple(sorted(c)) for c in combinations(candidates, k)]:
            if len(set(bs)) != k or bs in tried:
                continue
            tried.add(bs)
            step = try_beacons(bs)
            if step is not None:
                return step
    raise DecompositionError(
        "no valid multi-beacon step exists in the double-chain subtree; "
        "this contradicts the removal guarantee for valid decompositions")


def place_all(d: TetDecomposition, seed: int = 0) -> BeaconPlacement:
    """Run the placement loop to completion and return the certificate.

    The spanning tree is rebuilt from the remaining tetrahedra after every
    step (fresh leaf root). The certificate is re-verified before being
    returned; a violation means a bug, not a bad input.
    """
    g = dual_graph(d)
    active = set(range(d.m))
    steps: list[PlacementStep] = []
    while active:
        if len(active) <= 4:
            step = place_base_case(d, sorted(active), g)
        else:
            tree = leaf_rooted_spanning_tree(g, active, seed)
            leaf = select_deepest_leaf(tree)
            step = place_step1(d, tree, leaf, g)
            if step is None:
                step = place_step2(d, tree, leaf, g)
        steps.append(step)
        active -= set(step.removed)
    placement = BeaconPlacement(m=d.m, steps=steps, seed=seed)
    problems = check_placement(d, placement)
    if problems:
        raise DecompositionError("internal certificate violation: "
                                 + "; ".join(problems))
    return placement


def check_placement(d: TetDecomposition, placement: BeaconPlacement) -> list[str]:
    """Verify every certificate invariant; returns human-readable problems
    (empty list means the certificate is sound).

    Checks, per step: removal size >= 3k for inductive steps (base steps
    remove whatever is left), each removed tetrahedron contains a step
    beacon, the remaining tree stays connected, and an anchor tetrahedron
    with a step beacon remains unless the step finished the job. Globally:
    the deduplicated beacon count fits the budget and the beacon
    co-containment graph is connected.
    """
    problems: list[str] = []
    if placement.m != d.m:
        problems.append(f"certificate m={placement.m} but decomposition m={d.m}")
        return problems
    g = dual_graph(d)
    active = set(range(d.m))
    for idx, step in enumerate(placement.steps, start=1):
        tag = f"step {idx} [{step.rule}]"
        removed = set(step.removed)
        if not removed:
            problems.append(f"{tag}: removes nothing")
            continue
        if not removed <= active:
            problems.append(f"{tag}: removes inactive tets {sorted(removed - active)}")
        k = len(step.beacons)
        if step.rule.startswith("base"):
            if removed != active:
                problems.append(f"{tag}: base step must remove all remaining tets")
            if len(active) > 4:
                problems.append(f"{tag}: base step with {len(active)} tets remaining")
            if len(active) == 1 and k != 0:
                problems.append(f"{tag}: single tetrahedron needs no beacon")
            if len(active) >= 2 and k != 1:
                problems.append(f"{tag}: shared-vertex base step needs one beacon")
        else:
            if k < 1:
                problems.append(f"{tag}: inductive step without beacons")
            if len(removed) < 3 * k:
                problems.append(f"{tag}: removed {len(removed)} < 3k = {3 * k}")
        for t in sorted(removed):
            if step.beacons and not any(b in d.tets[t].v for b in step.beacons):
                problems.append(f"{tag}: removed tet {t} contains no step beacon")
        remaining = active - removed
        if not step.rule.startswith("base") and len(active) > 4 and removed <= active:
            # the removal must consist of complete subtrees of this round's
            # tree, which is exactly what keeps the remaining tree connected
            try:
                tree = leaf_rooted_spanning_tree(g, active, placement.seed)
            except DecompositionError as exc:
                problems.append(f"{tag}: cannot rebuild round tree: {exc}")
                return problems
            if tree.root in removed and remaining:
                problems.append(f"{tag}: tree root removed while tets remain")
            for x in sorted(removed):
                p = tree.parent[x]
                if p is not None and p in removed:
                    continue
                if not set(tree.subtree(x)) <= removed:
                    problems.append(f"{tag}: removal cuts subtree at node {x}")
                    break
        if remaining:
            if not g.is_connected(remaining):
                problems.append(f"{tag}: remaining dual graph disconnected; "
                                f"not checking further steps")
                return problems
            if step.anchor is None:
                problems.append(f"{tag}: tets remain but no anchor recorded")
            elif step.anchor not in remaining:
                problems.append(f"{tag}: anchor {step.anchor} was removed")
            elif not any(b in d.tets[step.anchor].v for b in step.beacons):
                problems.append(f"{tag}: anchor {step.anchor} has no step beacon")
        else:
            if idx != len(placement.steps):
                problems.append(f"{tag}: emptied the decomposition early")
        active = remaining
    if active:
        problems.append(f"steps leave tets {sorted(active)} unremoved")

    beacons = placement.beacons
    if len(beacons) > placement.budget:
        problems.append(f"{len(beacons)} beacons exceed budget {placement.budget}")
    n = len(d.vertices)
    bad = [b for b in beacons if not 0 <= b < n]
    if bad:
        problems.append(f"beacon vertex indices out of range: {bad}")
    elif len(beacons) > 1:
        vertex_tets: dict[int, set[int]] = {b: set() for b in beacons}
        for i, t in enumerate(d.tets):
            for b in beacons:
                if b in t.v:
                    vertex_tets[b].add(i)
        remaining = set(beacons[1:])
        frontier = [beacons[0]]
        while frontier:
            u = frontier.pop()
            hit = [w for w in remaining if vertex_tets[u] & vertex_tets[w]]
            for w in hit:
                remaining.discard(w)
                frontier.append(w)
        if remaining:
            problems.append(f"beacon co-containment graph disconnected: "
                            f"{sorted(remaining)} unreachable")
    return problems
