"""Synthetic rectilinear town model: axis-aligned roads and box obstacles.

A road is a straight axis-aligned centerline segment carrying two lanes of
``lane_width`` meters each, one per travel direction (right-hand traffic).
Obstacles are axis-aligned boxes standing on the ground plane z = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml


@dataclass(frozen=True)
class RoadSegment:
    x1: float
    y1: float
    x2: float
    y2: float
    lane_width: float = 3.5

    def __post_init__(self) -> None:
        if self.lane_width <= 0.0:
            raise ValueError("lane_width must be > 0")
        if not (math.isclose(self.x1, self.x2) or math.isclose(self.y1, self.y2)):
            raise ValueError("road segments must be axis-aligned")
        if math.isclose(self.x1, self.x2) and math.isclose(self.y1, self.y2):
            raise ValueError("zero-length road")

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)

    @property
    def start(self) -> tuple[float, float]:
        return (self.x1, self.y1)

    @property
    def end(self) -> tuple[float, float]:
        return (self.x2, self.y2)

    def axis(self) -> tuple[float, float]:
        """Unit vector from start to end."""
        L = self.length
        return ((self.x2 - self.x1) / L, (self.y2 - self.y1) / L)

    def project(self, x: float, y: float) -> tuple[float, float, float]:
        """Project (x, y) onto the centerline.

        Returns (px, py, distance); the projection is clamped to the segment.
        """
        ax, ay = self.axis()
        t = (x - self.x1) * ax + (y - self.y1) * ay
        t = max(0.0, min(self.length, t))
        px, py = self.x1 + t * ax, self.y1 + t * ay
        return px, py, math.hypot(x - px, y - py)

    def contains(self, x: float, y: float, margin: float = 0.0) -> bool:
        """True if (x, y) lies on the paved surface (both lanes)."""
        _, _, d = self.project(x, y)
        return d <= self.lane_width + margin


@dataclass(frozen=True)
class ObstacleBox:
    """Axis-aligned box: center, half extents, height above ground."""

    cx: float
    cy: float
    hx: float
    hy: float
    height: float
    label: str = "static"  # static | dynamic

    def __post_init__(self) -> None:
        if self.height <= 0.0 or self.hx <= 0.0 or self.hy <= 0.0:
            raise ValueError("obstacle extents and height must be > 0")
        if self.label not in ("static", "dynamic"):
            raise ValueError(f"unknown obstacle label {self.label!r}")


@dataclass
class World:
    roads: list[RoadSegment] = field(default_factory=list)
    obstacles: list[ObstacleBox] = field(default_factory=list)

    def nearest_road(self, x: float, y: float) -> tuple[RoadSegment, float]:
        if not self.roads:
            raise ValueError("world has no roads")
        best, best_d = None, math.inf
        for road in self.roads:
            _, _, d = road.project(x, y)
            if d < best_d:
                best, best_d = road, d
        return best, best_d

    def on_road(self, x: float, y: float, margin: float = 0.0) -> bool:
        return any(r.contains(x, y, margin) for r in self.roads)

    def with_obstacles(self, extra: list[ObstacleBox]) -> "World":
        return World(roads=list(self.roads), obstacles=list(self.obstacles) + list(extra))

    def obstacle_arrays(self) -> tuple[np.ndarray, np.ndarray, list[str]]:
        """(boxes_min, boxes_max) as (n, 3) arrays plus labels, for raycasting."""
        n = len(self.obstacles)
        lo = np.zeros((n, 3))
        hi = np.zeros((n, 3))
        labels = []
        for i, ob in enumerate(self.obstacles):
            lo[i] = (ob.cx - ob.hx, ob.cy - ob.hy, 0.0)
            hi[i] = (ob.cx + ob.hx, ob.cy + ob.hy, ob.height)
            labels.append(ob.label)
        return lo, hi, labels


def load_world(path: str | Path) -> World:
    """Load a town file (YAML mapping with roads[] and obstacles[])."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    roads = [RoadSegment(float(r["x1"]), float(r["y1"]), float(r["x2"]), float(r["y2"]),
                         float(r.get("lane_width", 3.5)))
             for r in doc.get("roads", [])]
    obstacles = [ObstacleBox(float(o["cx"]), float(o["cy"]), float(o["hx"]), float(o["hy"]),
                             float(o["height"]), str(o.get("label", "static")))
                 for o in doc.get("obstacles", [])]
    return World(roads=roads, obstacles=obstacles)


def save_world(world: World, path: str | Path) -> None:
    doc = {
        "roads": [{"x1": r.x1, "y1": r.y1, "x2": r.x2, "y2": r.y2,
                   "lane_width": r.lane_width} for r in world.roads],
        "obstacles": [{"cx": o.cx, "cy": o.cy, "hx": o.hx, "hy": o.hy,
                       "height": o.height, "label": o.label} for o in world.obstacles],
    }
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)
