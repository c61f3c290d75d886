"""Synthetic benchmark towns.

Town 1 is a 3x3 block grid with two corner stubs (7 intersections), town 2
a full 4x4 grid (12 intersections); both use 80 m blocks, two-lane roads
and a handful of block-interior buildings for LiDAR texture. The loop town
hosts the packaged partial-blockage scenario whose removable-wall
workaround shuttles forever between two detections.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..world import ObstacleBox, RoadSegment, World

LANE_WIDTH = 3.5
BLOCK = 80.0


def _grid_roads(xs: list[float], ys: list[float]) -> list[RoadSegment]:
    roads = []
    for y in ys:
        for i in range(len(xs) - 1):
            roads.append(RoadSegment(xs[i], y, xs[i + 1], y, LANE_WIDTH))
    for x in xs:
        for j in range(len(ys) - 1):
            roads.append(RoadSegment(x, ys[j], x, ys[j + 1], LANE_WIDTH))
    return roads


def _building(cx: float, cy: float, half: float = 14.0) -> ObstacleBox:
    return ObstacleBox(cx, cy, half, half, height=8.0, label="static")


def build_town1() -> World:
    """3x3 grid plus two corner stubs: 7 nodes of degree > 2."""
    coords = [0.0, BLOCK, 2 * BLOCK]
    roads = _grid_roads(coords, coords)
    roads.append(RoadSegment(0.0, 0.0, 0.0, -BLOCK, LANE_WIDTH))
    roads.append(RoadSegment(2 * BLOCK, 2 * BLOCK, 2 * BLOCK, 3 * BLOCK, LANE_WIDTH))
    buildings = [_building(40.0, 40.0), _building(120.0, 40.0),
                 _building(40.0, 120.0), _building(120.0, 120.0)]
    return World(roads=roads, obstacles=buildings)


def build_town2() -> World:
    """Full 4x4 grid: 12 nodes of degree > 2."""
    coords = [0.0, BLOCK, 2 * BLOCK, 3 * BLOCK]
    roads = _grid_roads(coords, coords)
    buildings = [_building(40.0, 40.0), _building(200.0, 40.0),
                 _building(120.0, 120.0), _building(40.0, 200.0),
                 _building(200.0, 200.0), _building(120.0, 200.0)]
    return World(roads=roads, obstacles=buildings)


def build_loop_town() -> World:
    """3x3 grid with a long west approach and an east stub on the middle row."""
    coords = [0.0, BLOCK, 2 * BLOCK]
    roads = _grid_roads(coords, coords)
    roads.append(RoadSegment(-3 * BLOCK, BLOCK, 0.0, BLOCK, LANE_WIDTH))
    roads.append(RoadSegment(2 * BLOCK, BLOCK, 3 * BLOCK, BLOCK, LANE_WIDTH))
    buildings = [_building(40.0, 40.0), _building(120.0, 120.0)]
    return World(roads=roads, obstacles=buildings)


BUILTIN_TOWNS = {
    "town1": build_town1,
    "town2": build_town2,
    "loop": build_loop_town,
}


def packaged_path(kind: str, name: str) -> Path:
    """Filesystem path of a packaged data file (towns/ or scenarios/)."""
    return Path(str(resources.files("gridnav").joinpath("data", kind, name)))


def resolve_town(spec: str) -> World:
    """Load a town by file path or builtin name (town1, town2, loop)."""
    from ..world import load_world

    p = Path(spec)
    if p.exists():
        return load_world(p)
    if spec in BUILTIN_TOWNS:
        packaged = packaged_path("towns", f"{spec}.yaml")
        if packaged.exists():
            return load_world(packaged)
        return BUILTIN_TOWNS[spec]()
    raise FileNotFoundError(f"town file or builtin name not found: {spec}")
