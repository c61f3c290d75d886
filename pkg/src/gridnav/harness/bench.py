"""Affected-area micro-benchmark: convex hull vs bounding polygon.

Times the region computation alone and the full occupancy update for both
area modes over a scan corpus, reporting medians and hull/polygon ratios.
"""
from __future__ import annotations

import dataclasses
import io
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..geometry import Pose2D
from ..lidar import LidarConfig, ScanPoint, downsample_scan, filter_scan, raycast_scan
from ..ogm import HULL, POLYGON, OccupancyGrid, OgmParams, affected_area, \
    prepare_beams, update as ogm_update
from ..world import World


def make_scan_corpus(world: World, n: int, seed: int,
                     lidar: LidarConfig | None = None,
                     filter_height: float = 2.5,
                     downsample: int = 2,
                     min_points: int = 20) -> tuple[list[list[ScanPoint]], list[Pose2D]]:
    """Filtered scans from seeded random on-road poses."""
    rng = np.random.default_rng(seed)
    lidar = lidar or LidarConfig(n_layers=8)
    scans, poses = [], []
    attempts = 0
    while len(scans) < n and attempts < 50 * n:
        attempts += 1
        road = world.roads[int(rng.integers(len(world.roads)))]
        t = float(rng.uniform(0.0, road.length))
        ax, ay = road.axis()
        side = 1.0 if rng.random() < 0.5 else -1.0
        x = road.x1 + t * ax + side * ay * road.lane_width / 2.0
        y = road.y1 + t * ay - side * ax * road.lane_width / 2.0
        yaw = float(rng.uniform(-np.pi, np.pi))
        pose = Pose2D(x, y, yaw)
        scan = filter_scan(raycast_scan(world, pose, lidar), filter_height,
                           lidar.mount_height)
        scan = downsample_scan(scan, downsample)
        if sum(p.reflected for p in scan) >= min_points:
            scans.append(scan)
            poses.append(pose)
    if len(scans) < n:
        raise ValueError("could not collect enough scans with reflected returns")
    return scans, poses


def save_scan_corpus(scans: list[list[ScanPoint]], poses: list[Pose2D],
                     path: str | Path) -> None:
    arrays = {f"scan_{i}": np.array([[p.x, p.y, p.z] for p in s if p.reflected])
              for i, s in enumerate(scans)}
    arrays["poses"] = np.array([[p.x, p.y, p.yaw] for p in poses])
    np.savez(path, **arrays)


def load_scan_corpus(path: str | Path) -> tuple[list[list[ScanPoint]], list[Pose2D]]:
    data = np.load(path)
    poses = [Pose2D(*row) for row in data["poses"]]
    scans = []
    for i in range(len(poses)):
        pts = data[f"scan_{i}"]
        scans.append([ScanPoint(float(x), float(y), float(z), "static", True)
                      for x, y, z in pts])
    return scans, poses


@dataclass
class BenchReport:
    n_scans: int
    repetitions: int
    region_time_hull: float      # median seconds
    region_time_polygon: float
    update_time_hull: float
    update_time_polygon: float
    cells_hull: float            # mean affected cells
    cells_polygon: float

    @property
    def region_ratio(self) -> float:
        """hull / polygon region-computation time (< 1 means hull faster)."""
        return self.region_time_hull / self.region_time_polygon

    @property
    def cells_ratio(self) -> float:
        return self.cells_hull / self.cells_polygon

    @property
    def update_ratio(self) -> float:
        return self.update_time_hull / self.update_time_polygon

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("metric,value\n")
        for k, v in dataclasses.asdict(self).items():
            buf.write(f"{k},{v}\n")
        for k in ("region_ratio", "cells_ratio", "update_ratio"):
            buf.write(f"{k},{getattr(self, k):.6f}\n")
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        return [
            f"region computation: hull {self.region_time_hull * 1e6:.1f} us, "
            f"polygon {self.region_time_polygon * 1e6:.1f} us "
            f"(hull/polygon = {self.region_ratio:.3f})",
            f"affected cells: hull {self.cells_hull:.0f}, "
            f"polygon {self.cells_polygon:.0f} "
            f"(hull/polygon = {self.cells_ratio:.3f})",
            f"full update: hull {self.update_time_hull * 1e6:.1f} us, "
            f"polygon {self.update_time_polygon * 1e6:.1f} us "
            f"(hull/polygon = {self.update_ratio:.3f})",
        ]


def bench_affected_area(scans: list[list[ScanPoint]], poses: list[Pose2D],
                        repetitions: int = 3,
                        params: OgmParams | None = None) -> BenchReport:
    """Median wall-clock for region computation and full update, per mode."""
    if len(scans) < 1:
        raise ValueError("empty scan corpus")
    base = params or OgmParams()

    region_t = {HULL: [], POLYGON: []}
    update_t = {HULL: [], POLYGON: []}
    cells = {HULL: [], POLYGON: []}

    for mode in (HULL, POLYGON):
        mode_params = dataclasses.replace(base, area_mode=mode)
        for scan, pose in zip(scans, poses):
            grid = OccupancyGrid.create(mode_params, pose)
            beams = prepare_beams(scan, grid.local_yaw, mode_params.wall_depth)
            if beams is None:
                continue
            for _ in range(repetitions):
                t0 = time.perf_counter()
                rows, _cols = affected_area(beams, grid, mode)
                region_t[mode].append(time.perf_counter() - t0)
            cells[mode].append(rows.shape[0])
            for _ in range(repetitions):
                g = OccupancyGrid.create(mode_params, pose)
                t0 = time.perf_counter()
                ogm_update(g, scan, pose, pose, 0.0)
                update_t[mode].append(time.perf_counter() - t0)

    return BenchReport(
        n_scans=len(scans),
        repetitions=repetitions,
        region_time_hull=statistics.median(region_t[HULL]),
        region_time_polygon=statistics.median(region_t[POLYGON]),
        update_time_hull=statistics.median(update_t[HULL]),
        update_time_polygon=statistics.median(update_t[POLYGON]),
        cells_hull=statistics.fmean(cells[HULL]),
        cells_polygon=statistics.fmean(cells[POLYGON]),
    )
