"""OGM-based road blockage detection along the route, and steering rectification.

Route cells are projected to lane centers (right-hand traffic), smoothed
with a Bezier curve and checked against the occupancy grid in small square
slices. The occupied-count threshold grows with distance from the vehicle,
since the grid's history effect makes near ranges more trustworthy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bicycle import BicycleParams, bicycle_predict
from .geometry import GridIndex, Pose2D, bezier_sample, resample_polyline, wrap_angle
from .ogm import OccupancyGrid, slice_occupied_count
from .planner.grid import Direction, PlanningMap
from .world import RoadSegment


@dataclass(frozen=True)
class BlockageParams:
    route_pts: int = 5              # route cells to inspect, vehicle cell included
    p_occ: float = 0.65
    slice_width: float = 2.0        # meters
    cell_occupied_pts: int = 6      # base count threshold at range 0
    distance_scaling: float = 0.02  # threshold growth per meter of range
    bezier_samples: int = 50

    def __post_init__(self) -> None:
        if self.route_pts < 2 or self.cell_occupied_pts < 1:
            raise ValueError("route_pts >= 2 and cell_occupied_pts >= 1 required")
        if not 0.0 < self.p_occ < 1.0:
            raise ValueError("p_occ must be in (0, 1)")


@dataclass(frozen=True)
class BlockageEvent:
    tick: int
    cell: GridIndex
    world_xy: tuple[float, float]
    occupied_count: int
    detection_range: float          # meters from the vehicle


@dataclass
class BlockageOutcome:
    road_blocked: bool
    event: Optional[BlockageEvent] = None


def lane_center_waypoints(cells: list[GridIndex], pmap: PlanningMap,
                          roads: list[RoadSegment]) -> np.ndarray:
    """Project route cell centers onto road centerlines, shifted to the lane.

    The lateral shift is half a lane width to the right of the travel
    direction (right-hand traffic), so westbound travel on an east-west
    road mirrors the eastbound offset.
    """
    if not cells:
        return np.empty((0, 2))
    n = len(cells)
    out = np.empty((n, 2))
    for i, cell in enumerate(cells):
        wx, wy = pmap.center_of(cell)
        best, best_d = None, math.inf
        for road in roads:
            px, py, d = road.project(wx, wy)
            if d < best_d:
                best, best_d = (road, px, py), d
        if best is None or best_d > pmap.resolution:
            raise ValueError(f"route cell {cell} is not on any road")
        road, px, py = best
        ax, ay = road.axis()
        if n > 1:
            a, b = cells[max(i - 1, 0)], cells[min(i + 1, n - 1)]
            tx, ty = float(b.col - a.col), float(b.row - a.row)
            if ax * tx + ay * ty < 0.0:
                ax, ay = -ax, -ay
        half = road.lane_width / 2.0
        out[i] = (px + ay * half, py - ax * half)   # (ay, -ax) is right of travel
    return out


def detect_blockages(pmap: PlanningMap, route_cells: list[GridIndex],
                     grid: OccupancyGrid, params: BlockageParams,
                     roads: list[RoadSegment], vehicle_xy,
                     wall_mode: str = "directed", tick: int = 0) -> BlockageOutcome:
    """Scan the next route cells for occupancy along the lane-center curve.

    The first cell whose accumulated occupied-slice count exceeds the
    distance-scaled threshold gets a wall blocking the travel approach
    (directed, or full in the removable-wall workaround mode); scanning
    stops at the first detection. route_cells[0] must be the vehicle cell.
    """
    cells = route_cells[:params.route_pts]
    if len(cells) < 2:
        return BlockageOutcome(False)
    waypoints = lane_center_waypoints(cells, pmap, roads)
    curve_w = bezier_sample(waypoints, params.bezier_samples)
    curve_uv = grid.world_to_local(curve_w)
    curve_cells = [pmap.cell_of(x, y) for x, y in curve_w]

    vx, vy = float(vehicle_xy[0]), float(vehicle_xy[1])
    prev = cells[0]
    for cell in cells[1:]:
        cx, cy = pmap.center_of(cell)
        rng = math.hypot(cx - vx, cy - vy)
        threshold = params.cell_occupied_pts * (1.0 + params.distance_scaling * rng)
        occ = 0
        for k in range(len(curve_cells)):
            if curve_cells[k] != cell:
                continue
            occ += slice_occupied_count(grid, curve_uv[k], params.slice_width,
                                        params.p_occ)
            if occ > threshold:
                travel = Direction.between(prev, cell)
                if wall_mode == "removable":
                    pmap.extra_walls.add(cell)
                else:
                    pmap.add_directed_wall(cell, travel)
                event = BlockageEvent(tick=tick, cell=cell, world_xy=(cx, cy),
                                      occupied_count=occ, detection_range=rng)
                return BlockageOutcome(True, event)
        prev = cell
    return BlockageOutcome(False)


@dataclass(frozen=True)
class RectifyParams:
    max_correction: float = math.radians(12.0)
    step: float = math.radians(2.0)
    lookahead: float = 12.0         # meters of trajectory to check
    horizon: float = 3.0
    n_states: int = 5
    p_occ: float = 0.65

    def __post_init__(self) -> None:
        if self.step <= 0.0 or self.max_correction < self.step:
            raise ValueError("step > 0 and max_correction >= step required")


def _trajectory_points(pose: Pose2D, speed: float, steering: float,
                       rect: RectifyParams, bike: BicycleParams) -> np.ndarray:
    params = BicycleParams(wheelbase=bike.wheelbase, max_steer=bike.max_steer,
                           horizon=rect.horizon, n_states=rect.n_states)
    states = bicycle_predict(pose, speed, steering, params)
    pts = np.array([[s.x, s.y] for s in states])
    dense = resample_polyline(pts, max_spacing=0.5)
    d = np.hypot(dense[:, 0] - pose.x, dense[:, 1] - pose.y)
    return dense[d <= rect.lookahead]


def _occupied_mask(points: np.ndarray, grid: OccupancyGrid, p_occ: float) -> np.ndarray:
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    uv = grid.world_to_local(points)
    cols = np.floor(uv[:, 0]).astype(int)
    rows = np.floor(uv[:, 1]).astype(int)
    side = grid.params.side
    inb = (rows >= 0) & (rows < side) & (cols >= 0) & (cols < side)
    thresh = math.log(p_occ / (1.0 - p_occ))
    occ = np.zeros(points.shape[0], dtype=bool)
    occ[inb] = grid.cells[rows[inb], cols[inb]] > thresh
    return occ


def rectify_steering(steering: float, pose: Pose2D, speed: float,
                     grid: OccupancyGrid, rect: RectifyParams,
                     bike: BicycleParams) -> tuple[float, bool]:
    """Nudge the steering angle until the short-horizon rollout is free.

    Corrections are tried smallest magnitude first, preferring the sign
    away from the nearest occupied rollout point; if no correction within
    max_correction clears the trajectory the original steering is returned
    with the blocked flag set so the caller can brake.
    """
    pts = _trajectory_points(pose, speed, steering, rect, bike)
    occ = _occupied_mask(pts, grid, rect.p_occ)
    if not occ.any():
        return steering, False

    blocked_pts = pts[occ]
    d = np.hypot(blocked_pts[:, 0] - pose.x, blocked_pts[:, 1] - pose.y)
    nearest = blocked_pts[int(np.argmin(d))]
    hx, hy = math.cos(pose.yaw), math.sin(pose.yaw)
    side_sign = hx * (nearest[1] - pose.y) - hy * (nearest[0] - pose.x)
    preferred = -1.0 if side_sign > 0.0 else 1.0   # steer away from the obstacle

    n_steps = int(math.floor(rect.max_correction / rect.step + 1e-9))
    for k in range(1, n_steps + 1):
        for sign in (preferred, -preferred):
            cand = steering + sign * k * rect.step
            if abs(cand) > bike.max_steer:
                continue
            cpts = _trajectory_points(pose, speed, cand, rect, bike)
            if not _occupied_mask(cpts, grid, rect.p_occ).any():
                return cand, False
    return steering, True
