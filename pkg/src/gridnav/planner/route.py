"""Route bookkeeping and per-cell navigational command assignment."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..geometry import GridIndex


class NavCommand(Enum):
    FOLLOW_LANE = "follow_lane"
    GO_LEFT = "go_left"
    GO_RIGHT = "go_right"
    GO_STRAIGHT = "go_straight"
    GOAL_REACHED = "goal_reached"


@dataclass
class Route:
    cells: list[GridIndex]
    cmds: list[NavCommand] = field(default_factory=list)
    next: int = 1                      # index of the cell after the vehicle's
    prev_cell: Optional[GridIndex] = None
    route_exited: bool = False
    road_blocked: bool = False

    def index_of(self, cell: GridIndex) -> Optional[int]:
        try:
            return self.cells.index(cell)
        except ValueError:
            return None


def assign_commands(cells: list[GridIndex], intersection_cells: set[GridIndex],
                    far_inters: int, inter_exited: int) -> list[NavCommand]:
    """FollowLane everywhere except around intersections on the route.

    At route index i on an intersection cell, the turn direction comes from
    the cross product of the incoming and outgoing unit steps in the world
    frame (x east, y north): positive means a left turn. The command
    overwrites indices [i - far_inters, i + inter_exited], clipped.
    """
    n = len(cells)
    cmds = [NavCommand.FOLLOW_LANE] * n
    for i in range(n):
        if cells[i] not in intersection_cells:
            continue
        if 0 < i < n - 1:
            vin = (cells[i].col - cells[i - 1].col, cells[i].row - cells[i - 1].row)
            vout = (cells[i + 1].col - cells[i].col, cells[i + 1].row - cells[i].row)
            s = vin[0] * vout[1] - vin[1] * vout[0]
            if s > 0.1:
                cmd = NavCommand.GO_LEFT
            elif s < -0.1:
                cmd = NavCommand.GO_RIGHT
            else:
                cmd = NavCommand.GO_STRAIGHT
        else:
            cmd = NavCommand.GO_STRAIGHT  # no incoming or outgoing leg
        lo = max(0, i - far_inters)
        hi = min(n - 1, i + inter_exited)
        for j in range(lo, hi + 1):
            cmds[j] = cmd
    return cmds


def route_progress(route: Route, car_cell: GridIndex) -> str:
    """Advance the route cursor to the vehicle's cell.

    The vehicle may sit on the previous, current or next route cell
    (tolerance one index either way); anywhere else flags route_exited.
    Returns one of "advanced", "unchanged", "exited".
    """
    j = route.index_of(car_cell)
    if j is not None and abs(j - (route.next - 1)) <= 1:
        moved = j != route.next - 1
        route.prev_cell = car_cell
        route.next = j + 1
        return "advanced" if moved else "unchanged"
    route.route_exited = True
    return "exited"
