"""Beacon-based routing in tetrahedral decompositions.

Exact geometric predicates, decomposition validation and dual graphs,
the constructive beacon-placement certificate for the floor((m+1)/3)
routing budget, event-driven attraction tracing with an independent
small-step oracle, routability verification, and the spiral instance
families that make the budget tight.
"""

__version__ = "0.1.0"

from .attraction import (AttractionPath, Polygon2, Region3, TraceConfig,
                         attract, covers)
from .decomposition import (DecompositionError, DualGraph, SpanningTree,
                            TetDecomposition, ValidationReport, dual_graph,
                            leaf_rooted_spanning_tree, shared_feature_of_set,
                            validate)
from .exact import QSqrt3
from .generators import (SpiralParams, figure_configuration, project_to_plane,
                         spiral_polygon, spiral_polyhedron, stacked_hallways)
from .geometry import (Containment, Point3, Tetrahedron, orient3d,
                       point_in_tetrahedron, shared_feature)
from .placement import (BeaconPlacement, PlacementStep, budget,
                        check_placement, place_all)
from .routing import (CoverageCache, RouteResult, falsify_lower_bound, route,
                      verify_all_pairs)
from .smallstep import smallstep_attract

__all__ = [
    "AttractionPath", "BeaconPlacement", "Containment", "CoverageCache",
    "DecompositionError", "DualGraph", "PlacementStep", "Point3", "Polygon2",
    "QSqrt3", "Region3", "RouteResult", "SpanningTree", "SpiralParams",
    "TetDecomposition", "Tetrahedron", "TraceConfig", "ValidationReport",
    "attract", "budget", "check_placement", "covers", "dual_graph",
    "falsify_lower_bound", "figure_configuration", "leaf_rooted_spanning_tree",
    "orient3d", "place_all", "point_in_tetrahedron", "project_to_plane",
    "route", "shared_feature", "shared_feature_of_set", "smallstep_attract",
    "spiral_polygon", "spiral_polyhedron", "stacked_hallways", "validate",
    "verify_all_pairs",
]
