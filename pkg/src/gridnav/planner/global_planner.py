"""Topological global route planner with lazy A* and blockage-triggered replans.

A route is planned on the first call and kept until the vehicle exits it or
a road blockage is detected; only then does A* run again, after placing a
full wall in the cell behind the vehicle. A wall after the destination cell
(along the arrival orientation) is baked in at construction so routes
arrive in the desired lane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from ..geometry import GridIndex, Pose2D, resample_polyline, wrap_angle
from ..ogm import OccupancyGrid
from ..world import World
from .astar import a_star
from .graph import build_world_graph
from .grid import Direction, build_planning_map
from .route import NavCommand, Route, assign_commands, route_progress

if TYPE_CHECKING:
    from ..blockage import BlockageEvent, BlockageParams

DIRECTED = "directed"
REMOVABLE = "removable"


class NoRouteError(RuntimeError):
    """No path from the vehicle to the destination exists on the planning map."""


@dataclass(frozen=True)
class PlannerParams:
    resolution: float = 8.215        # planning map cell size, meters
    far_inters: int = 4              # cells before an intersection a turn command starts
    inter_exited: int = 1            # cells after an intersection the command holds
    goal_yaw_tol: float = math.pi / 4.0
    wall_mode: str = DIRECTED        # directed | removable (workaround comparison)
    wall_forget_dist: int = 6        # removable mode: drop walls farther than this (cells)

    def __post_init__(self) -> None:
        if self.far_inters < 0 or self.inter_exited < 0:
            raise ValueError("far_inters and inter_exited must be >= 0")
        if self.wall_mode not in (DIRECTED, REMOVABLE):
            raise ValueError(f"unknown wall_mode {self.wall_mode!r}")


class GlobalPlanner:
    def __init__(self, world: World, dest_pose: Pose2D,
                 params: PlannerParams | None = None,
                 blockage_params: "BlockageParams | None" = None,
                 avoidance_enabled: bool = True) -> None:
        from ..blockage import BlockageParams

        self.world = world
        self.params = params or PlannerParams()
        self.blockage_params = blockage_params or BlockageParams()
        self.avoidance_enabled = avoidance_enabled
        self.dest_pose = dest_pose

        self.graph = build_world_graph(world.roads)
        self.pmap = build_planning_map(self.graph, self.params.resolution)
        self.intersection_cells = {self.pmap.cell_of(x, y)
                                   for x, y in self.graph.intersection_positions()}
        # lane-offset destinations can fall one cell off the corridor
        self.dest_cell = self.snap_to_free(self.pmap.cell_of(dest_pose.x, dest_pose.y))
        after = Direction.from_yaw(dest_pose.yaw).step
        self.pmap.add_full_wall(GridIndex(self.dest_cell.row + after[0],
                                          self.dest_cell.col + after[1]))
        self.pristine_map = self.pmap.copy()

        self.route: Optional[Route] = None
        self.car_wall: Optional[GridIndex] = None
        self.removable_walls: list[GridIndex] = []
        self.replan_count = 0
        self.events: list["BlockageEvent"] = []

    # ---- helpers -----------------------------------------------------------

    def snap_to_free(self, cell: GridIndex, pmap=None) -> GridIndex:
        """Nearest free cell (lane offsets and corner cuts stray off-corridor)."""
        pmap = pmap if pmap is not None else self.pmap
        if pmap.is_free(cell):
            return cell
        best, best_d = None, None
        for radius in range(1, 4):
            for dr in range(-radius, radius + 1):
                for dc in range(-radius, radius + 1):
                    if max(abs(dr), abs(dc)) != radius:
                        continue
                    cand = GridIndex(cell.row + dr, cell.col + dc)
                    if pmap.is_free(cand):
                        d = abs(dr) + abs(dc)
                        if best is None or d < best_d:
                            best, best_d = cand, d
            if best is not None:
                return best
        return cell

    def car_cell_of(self, pose: Pose2D) -> GridIndex:
        return self.snap_to_free(self.pmap.cell_of(pose.x, pose.y))

    def shortest_route_length(self, start_pose: Pose2D) -> float:
        """Meters along the shortest route on the blockage-free map."""
        start = self.snap_to_free(self.pristine_map.cell_of(start_pose.x, start_pose.y),
                                  self.pristine_map)
        cells = a_star(self.pristine_map, start, self.dest_cell)
        if cells is None:
            raise NoRouteError("destination unreachable on the blockage-free map")
        return (len(cells) - 1) * self.params.resolution

    def _forget_far_walls(self, car_cell: GridIndex) -> None:
        keep = []
        for cell in self.removable_walls:
            if max(abs(cell.row - car_cell.row), abs(cell.col - car_cell.col)) \
                    > self.params.wall_forget_dist:
                self.pmap.extra_walls.discard(cell)
            else:
                keep.append(cell)
        self.removable_walls = keep

    def _replan(self, car_pose: Pose2D, car_cell: GridIndex) -> None:
        if self.car_wall is not None:
            self.pmap.extra_walls.discard(self.car_wall)
            self.car_wall = None
        back = Direction.from_yaw(car_pose.yaw).opposite.step
        behind = GridIndex(car_cell.row + back[0], car_cell.col + back[1])
        if self.pmap.is_free(behind) and behind != self.dest_cell:
            self.pmap.extra_walls.add(behind)
            self.car_wall = behind

        cells = a_star(self.pmap, car_cell, self.dest_cell)
        if cells is None and self.car_wall is not None:
            # dead ends require backing out through the walled cell
            self.pmap.extra_walls.discard(self.car_wall)
            self.car_wall = None
            cells = a_star(self.pmap, car_cell, self.dest_cell)
        if cells is None:
            raise NoRouteError(f"no route from {car_cell} to {self.dest_cell}")
        cmds = assign_commands(cells, self.intersection_cells,
                               self.params.far_inters, self.params.inter_exited)
        self.route = Route(cells=cells, cmds=cmds, next=1, prev_cell=car_cell)
        self.replan_count += 1

    # ---- main entry --------------------------------------------------------

    def plan_step(self, car_pose: Pose2D, speed: float, grid: OccupancyGrid,
                  tick: int = 0) -> NavCommand:
        """One planning tick: progress, blockage check, lazy replan, command."""
        from ..blockage import detect_blockages

        car_cell = self.car_cell_of(car_pose)

        if car_cell == self.dest_cell and \
                abs(wrap_angle(car_pose.yaw - self.dest_pose.yaw)) <= self.params.goal_yaw_tol:
            return NavCommand.GOAL_REACHED

        if self.route is not None and car_cell != self.route.prev_cell:
            route_progress(self.route, car_cell)

        if self.params.wall_mode == REMOVABLE:
            self._forget_far_walls(car_cell)

        if (self.route is not None and not self.route.route_exited
                and self.avoidance_enabled):
            suffix = self.route.cells[max(self.route.next - 1, 0):]
            if suffix and suffix[0] == car_cell:
                outcome = detect_blockages(self.pmap, suffix, grid,
                                           self.blockage_params, self.world.roads,
                                           (car_pose.x, car_pose.y),
                                           wall_mode=self.params.wall_mode, tick=tick)
                if outcome.road_blocked:
                    self.route.road_blocked = True
                    if self.params.wall_mode == REMOVABLE:
                        self.removable_walls.append(outcome.event.cell)
                    self.events.append(outcome.event)

        if self.route is None or self.route.road_blocked or self.route.route_exited:
            self._replan(car_pose, car_cell)

        idx = self.route.index_of(car_cell)
        if idx is None:
            idx = max(self.route.next - 1, 0)
        return self.route.cmds[idx]

    def lane_targets(self, horizon_cells: int = 8, spacing: float = 1.0) -> np.ndarray:
        """Densified lane-center waypoints from the vehicle's route position."""
        from ..blockage import lane_center_waypoints

        if self.route is None:
            return np.empty((0, 2))
        start = max(self.route.next - 1, 0)
        cells = self.route.cells[start:start + horizon_cells]
        if not cells:
            return np.empty((0, 2))
        pts = lane_center_waypoints(cells, self.pmap, self.world.roads)
        return resample_polyline(pts, max_spacing=spacing)
