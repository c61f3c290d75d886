"""Planning grid: one-cell-wide road corridors, walls and directed walls.

A directed wall forbids entering a cell while traveling in a specific
cardinal direction; all other approaches stay legal, which is how a
single-lane (partial) road blockage is encoded on the one-way corridor
abstraction. Full walls block every approach.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..geometry import GridIndex
from .graph import RoadGraph


class Direction(Enum):
    """Cardinal travel directions as (row, col) steps; rows grow north."""

    N = (1, 0)
    E = (0, 1)
    S = (-1, 0)
    W = (0, -1)

    @property
    def step(self) -> tuple[int, int]:
        return self.value

    @property
    def bit(self) -> int:
        return 1 << list(Direction).index(self)

    @property
    def opposite(self) -> "Direction":
        dr, dc = self.value
        return _BY_STEP[(-dr, -dc)]

    @staticmethod
    def from_yaw(yaw: float) -> "Direction":
        """Nearest cardinal direction for a world heading."""
        c = int(round(yaw / (math.pi / 2.0))) % 4
        return (Direction.E, Direction.N, Direction.W, Direction.S)[c]

    @staticmethod
    def between(a: GridIndex, b: GridIndex) -> "Direction":
        """Direction of the unit step from cell a to adjacent cell b."""
        return _BY_STEP[(b.row - a.row, b.col - a.col)]


_BY_STEP = {d.value: d for d in Direction}


@dataclass
class PlanningMap:
    walls: np.ndarray                       # bool (rows, cols): True = wall
    directed: np.ndarray                    # uint8 bitmask of blocked travel directions
    resolution: float
    origin: tuple[float, float]             # world coords of cell (0, 0) corner
    extra_walls: set[GridIndex] = field(default_factory=set)  # transient full walls

    @property
    def shape(self) -> tuple[int, int]:
        return self.walls.shape

    def in_bounds(self, cell: GridIndex) -> bool:
        return 0 <= cell.row < self.walls.shape[0] and 0 <= cell.col < self.walls.shape[1]

    def cell_of(self, x: float, y: float) -> GridIndex:
        return GridIndex(int(math.floor((y - self.origin[1]) / self.resolution)),
                         int(math.floor((x - self.origin[0]) / self.resolution)))

    def center_of(self, cell: GridIndex) -> tuple[float, float]:
        return (self.origin[0] + (cell.col + 0.5) * self.resolution,
                self.origin[1] + (cell.row + 0.5) * self.resolution)

    def is_free(self, cell: GridIndex) -> bool:
        return (self.in_bounds(cell) and not self.walls[cell.row, cell.col]
                and cell not in self.extra_walls)

    def can_enter(self, cell: GridIndex, travel: Direction) -> bool:
        """True if a move into ``cell`` while traveling ``travel`` is legal."""
        if not self.is_free(cell):
            return False
        return not (self.directed[cell.row, cell.col] & travel.bit)

    def add_directed_wall(self, cell: GridIndex, blocked_travel: Direction) -> None:
        """Forbid entering ``cell`` while traveling ``blocked_travel``.

        Multiple directed walls on one cell accumulate; adding to a full
        wall cell is a no-op.
        """
        if not self.in_bounds(cell) or not self.is_free(cell):
            return
        self.directed[cell.row, cell.col] |= blocked_travel.bit

    def remove_directed_walls(self, cell: GridIndex) -> None:
        if self.in_bounds(cell):
            self.directed[cell.row, cell.col] = 0

    def add_full_wall(self, cell: GridIndex) -> None:
        if self.in_bounds(cell):
            self.walls[cell.row, cell.col] = True

    def copy(self) -> "PlanningMap":
        return PlanningMap(self.walls.copy(), self.directed.copy(), self.resolution,
                           self.origin, set(self.extra_walls))


def build_planning_map(graph: RoadGraph, res: float) -> PlanningMap:
    """Rasterize road centerlines into 1-cell-wide free corridors.

    The grid origin is offset by half a cell so graph nodes land near cell
    centers; every cell traversed by a centerline (endpoints inclusive)
    is free, everything else is wall.
    """
    if not graph.nodes:
        raise ValueError("empty road graph")
    if res <= 0.0:
        raise ValueError("resolution must be > 0")
    min_x, min_y, max_x, max_y = graph.bounds()
    origin = (min_x - res / 2.0, min_y - res / 2.0)
    cols = int(math.floor((max_x - origin[0]) / res)) + 1
    rows = int(math.floor((max_y - origin[1]) / res)) + 1
    pmap = PlanningMap(walls=np.ones((rows, cols), dtype=bool),
                       directed=np.zeros((rows, cols), dtype=np.uint8),
                       resolution=res, origin=origin)

    seen = set()
    for a, b, _w in graph.edges:
        if (b, a) in seen:
            continue
        seen.add((a, b))
        (x1, y1), (x2, y2) = graph.nodes[a], graph.nodes[b]
        ca, cb = pmap.cell_of(x1, y1), pmap.cell_of(x2, y2)
        if ca.row != cb.row and ca.col != cb.col:
            raise ValueError("non-rectilinear road cannot be rasterized")
        r_lo, r_hi = sorted((ca.row, cb.row))
        c_lo, c_hi = sorted((ca.col, cb.col))
        pmap.walls[r_lo:r_hi + 1, c_lo:c_hi + 1] = False
    return pmap
