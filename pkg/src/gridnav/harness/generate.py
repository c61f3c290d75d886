"""Seeded blockage benchmark scenario generation.

Every scenario gets 1..5 blockages placed on its initial shortest route.
Half of the generated set (rounded up) is reroute-mandatory: it contains at
least one full-road blockage with a verified alternate route. The other
half carries only partial blockages (own-lane or opposite-lane), passable
without rerouting.
"""
from __future__ import annotations

import math
import random

from ..geometry import GridIndex, Pose2D
from ..planner.astar import a_star
from ..planner.graph import build_world_graph
from ..planner.grid import Direction, build_planning_map
from ..world import World
from .scenario import FULL, PARTIAL, Scenario, ScenarioBlockage

MIN_ROUTE_CELLS = 24        # detour slack: the 10 km/h deadline must survive a reroute
START_CLEARANCE_CELLS = 4   # keep blockages out of the OGM warm-up zone


class _TownPlan:
    """Planning-map view of a town for generation-time routing."""

    def __init__(self, world: World, res: float) -> None:
        self.world = world
        self.graph = build_world_graph(world.roads)
        self.pmap = build_planning_map(self.graph, res)
        self.intersection_cells = {self.pmap.cell_of(x, y)
                                   for x, y in self.graph.intersection_positions()}

    def lane_pose(self, x: float, y: float, travel: tuple[float, float]) -> Pose2D:
        """Pose in the right lane for a travel direction at a road point."""
        road, _ = self.world.nearest_road(x, y)
        px, py, _ = road.project(x, y)
        ax, ay = road.axis()
        if ax * travel[0] + ay * travel[1] < 0.0:
            ax, ay = -ax, -ay
        half = road.lane_width / 2.0
        return Pose2D(px + ay * half, py - ax * half, math.atan2(ay, ax))


def _route(plan: _TownPlan, a: GridIndex, b: GridIndex,
           walled: set[GridIndex] = frozenset()) -> list[GridIndex] | None:
    pmap = plan.pmap.copy()
    pmap.extra_walls |= set(walled)
    return a_star(pmap, a, b)


def _pick_endpoints(plan: _TownPlan, rng: random.Random):
    """Random (start, dest) node pair with a long enough route between them."""
    nodes = plan.graph.nodes
    for _ in range(200):
        ia, ib = rng.sample(range(len(nodes)), 2)
        (ax, ay), (bx, by) = nodes[ia], nodes[ib]
        ca = plan.pmap.cell_of(ax, ay)
        cb = plan.pmap.cell_of(bx, by)
        route = _route(plan, ca, cb)
        if route is not None and len(route) >= MIN_ROUTE_CELLS:
            return ca, cb, route
    raise ValueError("town offers no route pairs long enough for the benchmark")


def _mid_road_indices(plan: _TownPlan, route: list[GridIndex]) -> list[int]:
    """Route indices usable for blockage placement: mid-road, past warm-up."""
    out = []
    for i in range(START_CLEARANCE_CELLS, len(route) - 2):
        cell = route[i]
        near_inter = any(abs(cell.row - ic.row) + abs(cell.col - ic.col) <= 1
                         for ic in plan.intersection_cells)
        if not near_inter:
            out.append(i)
    return out


def _reroutable_indices(plan: _TownPlan, route: list[GridIndex],
                        slots: list[int]) -> list[int]:
    """Slots with an intersection 2-3 cells before them on the route.

    Blockage detection reaches about four planning cells ahead, so walls on
    these cells are placed while the junction offering the detour is still
    in front of the vehicle; anywhere else the vehicle must U-turn first.
    """
    out = []
    for i in slots:
        if i >= 2 and route[i - 2] in plan.intersection_cells:
            out.append(i)
        elif i >= 3 and route[i - 3] in plan.intersection_cells:
            out.append(i)
    return out


def _blockage_at(plan: _TownPlan, route: list[GridIndex], idx: int,
                 kind: str, lane: str) -> ScenarioBlockage:
    """Box for a route cell: full spans both lanes, partial one lane."""
    cell, nxt = route[idx], route[idx + 1]
    x, y = plan.pmap.center_of(cell)
    road, _ = plan.world.nearest_road(x, y)
    px, py, _ = road.project(x, y)
    ax, ay = road.axis()
    tx, ty = float(nxt.col - cell.col), float(nxt.row - cell.row)
    if ax * tx + ay * ty < 0.0:
        ax, ay = -ax, -ay
    rx, ry = ay, -ax                       # right of travel
    w = road.lane_width
    along, across = 1.0, w - 0.2           # full: both lanes minus shoulder slack
    if kind == PARTIAL:
        across = w / 2.0 - 0.2
        off = w / 2.0 if lane == "own" else -w / 2.0
        px, py = px + rx * off, py + ry * off
    hx = abs(ax) * along + abs(rx) * across
    hy = abs(ay) * along + abs(ry) * across
    return ScenarioBlockage(cx=px, cy=py, hx=hx, hy=hy, height=1.5, kind=kind)


def _cells_blocked_fully(route: list[GridIndex], picks: list[tuple[int, str, str]]):
    return {route[i] for i, kind, _lane in picks if kind == FULL}


def generate_blockage_scenarios(world: World, n: int, seed: int,
                                res: float = 8.215,
                                town_name: str = "town") -> list[Scenario]:
    """n deterministic scenarios; the first ceil(n/2) are reroute-mandatory."""
    if n < 1:
        raise ValueError("n must be >= 1")
    plan = _TownPlan(world, res)
    rng = random.Random(seed)
    n_mandatory = (n + 1) // 2
    scenarios = []
    for i in range(n):
        mandatory = i < n_mandatory
        for attempt in range(300):
            try:
                ca, cb, route = _pick_endpoints(plan, rng)
            except ValueError:
                raise
            slots = _mid_road_indices(plan, route)
            count = rng.randint(1, 5)
            if len(slots) < count:
                continue
            # the one reroute-causing blockage sits just past a junction so
            # detection happens before the turn-off; the rest are passable
            # opposite-lane partials
            reroutable = _reroutable_indices(plan, route, slots)
            if not reroutable:
                continue
            trigger = rng.choice(reroutable)
            rest_slots = [i for i in slots if abs(i - trigger) >= 2]
            extra = rng.sample(rest_slots, min(count - 1, len(rest_slots)))
            picks = [(trigger, FULL, "own") if mandatory
                     else (trigger, PARTIAL, "own")]
            picks += [(idx, PARTIAL, "opposite") for idx in sorted(extra)]
            full_cells = _cells_blocked_fully(route, picks)
            alt = _route(plan, ca, cb, walled=full_cells) if full_cells else route
            if mandatory and alt is None:
                continue
            has_alternate = alt is not None

            start_dir = (route[1].col - route[0].col, route[1].row - route[0].row)
            end_dir = (route[-1].col - route[-2].col, route[-1].row - route[-2].row)
            sx, sy = plan.pmap.center_of(ca)
            dx, dy = plan.pmap.center_of(cb)
            start = plan.lane_pose(sx, sy, start_dir)
            dest = plan.lane_pose(dx, dy, end_dir)
            blocks = [_blockage_at(plan, route, idx, kind, lane)
                      for idx, kind, lane in picks]
            scenarios.append(Scenario(
                id=f"{town_name}-s{i:02d}",
                start=start, dest=dest, blockages=blocks,
                seed=seed + i,
                reroute_mandatory=mandatory,
                has_alternate=has_alternate,
            ))
            break
        else:
            raise ValueError(
                "could not generate a valid scenario; the town may lack "
                "alternate routes for reroute-mandatory blockages")
    return scenarios
