import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tetrabeacon.generators import (SpiralParams, figure_configuration,
                                    spiral_polyhedron, stacked_hallways)

TOWER_SEEDS = list(range(1, 21))


def tower_for_seed(seed: int):
    """Deterministic stress-instance parameters; m ranges up to ~50."""
    levels = 2 + (seed * 7) % 13
    return stacked_hallways(levels, seed=seed)


@pytest.fixture(scope="session")
def corpus():
    """The acceptance corpus: spirals c=1..6, the three figure
    configurations, and 20 seeded stacked-hallway towers."""
    instances = []
    for c in range(1, 7):
        instances.append((f"spiral3d-c{c}", spiral_polyhedron(SpiralParams(c))))
    for name in ("star", "line", "lineSharedEdge"):
        instances.append((f"figure-{name}", figure_configuration(name)))
    for seed in TOWER_SEEDS:
        d = tower_for_seed(seed)
        instances.append((d.label, d))
    return instances
