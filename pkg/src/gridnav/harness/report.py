"""Rendering: matplotlib figures and PGM/PNG map exports for run outputs."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Rectangle

from ..geometry import GridIndex
from ..planner.grid import Direction, PlanningMap
from ..planner.route import Route
from ..world import World
from .metrics import Metrics
from .runner import ScenarioResult
from .scenario import Scenario


def _draw_world(ax, world: World) -> None:
    for road in world.roads:
        ax_x, ax_y = road.axis()
        w = road.lane_width
        if abs(ax_x) > abs(ax_y):   # horizontal
            x0, x1 = sorted((road.x1, road.x2))
            ax.add_patch(Rectangle((x0, road.y1 - w), x1 - x0, 2 * w,
                                   color="0.85", zorder=0))
        else:
            y0, y1 = sorted((road.y1, road.y2))
            ax.add_patch(Rectangle((road.x1 - w, y0), 2 * w, y1 - y0,
                                   color="0.85", zorder=0))
    for ob in world.obstacles:
        ax.add_patch(Rectangle((ob.cx - ob.hx, ob.cy - ob.hy), 2 * ob.hx, 2 * ob.hy,
                               color="0.45", zorder=1))
    ax.set_aspect("equal")
    ax.set_xlabel("x east [m]")
    ax.set_ylabel("y north [m]")


def save_scenario_figure(result: ScenarioResult, scenario: Scenario,
                         path: str | Path) -> None:
    """Trajectory over the town with blockages and detection marks."""
    fig, ax = plt.subplots(figsize=(7, 7))
    _draw_world(ax, result.world)
    for b in scenario.blockages:
        ax.add_patch(Rectangle((b.cx - b.hx, b.cy - b.hy), 2 * b.hx, 2 * b.hy,
                               color="firebrick", zorder=3, alpha=0.8))
    if result.ticks:
        xs = np.array([r.x for r in result.ticks])
        ys = np.array([r.y for r in result.ticks])
        ax.plot(xs, ys, color="tab:blue", lw=1.5, zorder=4, label="trajectory")
    ax.plot(scenario.start.x, scenario.start.y, "go", ms=8, zorder=5, label="start")
    ax.plot(scenario.dest.x, scenario.dest.y, "r*", ms=12, zorder=5, label="destination")
    if result.planner is not None:
        for ev in result.planner.events:
            ax.plot(ev.world_xy[0], ev.world_xy[1], "x", color="orange",
                    ms=9, mew=2, zorder=6)
    m = result.metrics
    ax.set_title(f"{scenario.id}: {'success' if m.success else 'failure'} "
                 f"({m.time_used:.1f}s / {m.deadline:.1f}s, "
                 f"{m.km_traveled * 1000.0:.0f} m)")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)


def save_summary_figure(rows: list[Metrics], summary: dict, path: str | Path) -> None:
    """Success-rate bar and distance-to-goal distribution for a run."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    n_ok = sum(m.success for m in rows)
    ax1.bar(["success", "failure"], [n_ok, len(rows) - n_ok],
            color=["tab:green", "tab:red"])
    ax1.set_title(f"success rate {summary['success_rate_pct']:.0f}% "
                  f"({n_ok}/{len(rows)})")
    ax1.set_ylabel("scenarios")
    ax2.hist([m.distance_to_goal_pct for m in rows], bins=10, range=(0, 100),
             color="tab:blue")
    ax2.set_xlabel("distance to goal traveled [%]")
    ax2.set_title(f"mean {summary['mean_distance_to_goal_pct']:.1f}%")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def save_bench_figure(report, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["region time", "full update time", "affected cells"]
    ratios = [report.region_ratio, report.update_ratio, report.cells_ratio]
    ax.bar(labels, ratios, color="tab:purple")
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_ylabel("hull / polygon ratio")
    ax.set_title("affected-area mode comparison")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


# ---- planning map raster exports ------------------------------------------

_GLYPHS = {
    Direction.E: [(0, 0), (1, 0)],   # entering eastward: west edge subcolumn
    Direction.W: [(0, 1), (1, 1)],
    Direction.N: [(0, 0), (0, 1)],   # entering northward: south edge subrow
    Direction.S: [(1, 0), (1, 1)],
}


def planning_map_pgm(pmap: PlanningMap) -> bytes:
    """2x2 subpixels per cell: free white, walls black, directed-wall glyphs gray.

    A directed wall darkens the subpixel pair on the edge the blocked
    travel direction enters through. Image row 0 is map north.
    """
    rows, cols = pmap.shape
    img = np.full((rows * 2, cols * 2), 255, dtype=np.uint8)
    for r in range(rows):
        for c in range(cols):
            block = img[r * 2:r * 2 + 2, c * 2:c * 2 + 2]
            if pmap.walls[r, c] or GridIndex(r, c) in pmap.extra_walls:
                block[:] = 0
                continue
            mask = pmap.directed[r, c]
            for d in Direction:
                if mask & d.bit:
                    for sr, sc in _GLYPHS[d]:
                        block[sr, sc] = 128
    img = img[::-1]
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def save_planning_map_png(pmap: PlanningMap, route: Route | None,
                          path: str | Path) -> None:
    """Walls black, free white, directed walls gray, route cells colored."""
    rows, cols = pmap.shape
    img = np.ones((rows, cols, 3))
    img[pmap.walls] = (0.0, 0.0, 0.0)
    for cell in pmap.extra_walls:
        if pmap.in_bounds(cell):
            img[cell.row, cell.col] = (0.15, 0.15, 0.15)
    img[(pmap.directed > 0) & ~pmap.walls] = (0.6, 0.6, 0.6)
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(img, origin="lower", interpolation="nearest")
    if route is not None and route.cells:
        cc = np.array([[c.col, c.row] for c in route.cells])
        ax.plot(cc[:, 0], cc[:, 1], color="tab:orange", lw=2)
        ax.plot(cc[0, 0], cc[0, 1], "go", ms=6)
        ax.plot(cc[-1, 0], cc[-1, 1], "r*", ms=10)
    ax.set_title("planning map")
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
