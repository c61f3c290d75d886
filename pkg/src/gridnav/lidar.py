"""Multi-layer LiDAR raycaster against the box world, plus scan filtering.

Beams are emitted in the sensor frame (x forward along vehicle heading,
y left, z up) on a fixed (layer, azimuth-bin) lattice, so identical inputs
always produce the identical scan in the identical order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Pose2D
from .world import World

GROUND = "ground"
STATIC = "static"
DYNAMIC = "dynamic"


@dataclass(frozen=True)
class LidarConfig:
    n_layers: int = 32
    fov_upper: float = math.radians(10.0)
    fov_lower: float = math.radians(-30.0)
    azimuth_resolution: float = math.radians(2.0)
    azimuth_span: float = 2.0 * math.pi   # [0, pi) option covers front-facing use
    max_range: float = 150.0
    mount_height: float = 2.0
    unreflected_value: float = 0.0

    def __post_init__(self) -> None:
        if self.fov_lower >= self.fov_upper:
            raise ValueError("fov_lower must be < fov_upper")
        if self.n_layers < 1 or self.max_range <= 0.0:
            raise ValueError("n_layers >= 1 and max_range > 0 required")

    @property
    def n_azimuth(self) -> int:
        return int(math.ceil(self.azimuth_span / self.azimuth_resolution))

    def layer_elevations(self) -> np.ndarray:
        """Beam elevations, endpoint-inclusive from fov_lower to fov_upper."""
        if self.n_layers == 1:
            return np.array([(self.fov_lower + self.fov_upper) / 2.0])
        return np.linspace(self.fov_lower, self.fov_upper, self.n_layers)

    def azimuth_angles(self) -> np.ndarray:
        """Beam azimuths at bin anchors, sensor frame, spanning azimuth_span."""
        start = -self.azimuth_span / 2.0
        return start + np.arange(self.n_azimuth) * self.azimuth_resolution


@dataclass(frozen=True, slots=True)
class ScanPoint:
    """One beam result in the sensor frame.

    Reflected points carry the hit position; unreflected points carry the
    unit beam direction only (free-space evidence).
    """

    x: float
    y: float
    z: float
    label: Optional[str]
    reflected: bool

    @property
    def range(self) -> float:
        return math.hypot(math.hypot(self.x, self.y), self.z)


def raycast_scan(world: World, sensor_pose: Pose2D, config: LidarConfig) -> list[ScanPoint]:
    """Cast one beam per (layer, azimuth bin); nearest box or ground hit wins.

    Results are ordered layer-major (layer 0 = lowest elevation), then by
    azimuth bin, and are bit-identical for identical inputs.
    """
    elev = config.layer_elevations()
    azim = config.azimuth_angles()
    n_l, n_a = elev.shape[0], azim.shape[0]

    # sensor-frame unit directions, one row per beam (layer-major)
    ce, se = np.cos(elev), np.sin(elev)
    ca, sa = np.cos(azim), np.sin(azim)
    dirs_s = np.empty((n_l * n_a, 3))
    dirs_s[:, 0] = np.repeat(ce, n_a) * np.tile(ca, n_l)
    dirs_s[:, 1] = np.repeat(ce, n_a) * np.tile(sa, n_l)
    dirs_s[:, 2] = np.repeat(se, n_a)

    cy, sy = math.cos(sensor_pose.yaw), math.sin(sensor_pose.yaw)
    dirs_w = np.empty_like(dirs_s)
    dirs_w[:, 0] = dirs_s[:, 0] * cy - dirs_s[:, 1] * sy
    dirs_w[:, 1] = dirs_s[:, 0] * sy + dirs_s[:, 1] * cy
    dirs_w[:, 2] = dirs_s[:, 2]
    origin = np.array([sensor_pose.x, sensor_pose.y, config.mount_height])

    n_rays = dirs_w.shape[0]
    best_t = np.full(n_rays, np.inf)
    best_label = np.full(n_rays, -1, dtype=int)  # -1 none, -2 ground, >=0 obstacle idx

    lo, hi, labels = world.obstacle_arrays()
    if lo.shape[0] > 0:
        # slab intersection, vectorized over rays x boxes
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / dirs_w                                # (R, 3)
            t1 = (lo[None, :, :] - origin) * inv[:, None, :]  # (R, B, 3)
            t2 = (hi[None, :, :] - origin) * inv[:, None, :]
        t_near = np.nanmax(np.minimum(t1, t2), axis=2)
        t_far = np.nanmin(np.maximum(t1, t2), axis=2)
        hit = (t_near <= t_far) & (t_far >= 0.0)
        t_hit = np.where(t_near >= 0.0, t_near, t_far)        # origin inside a box
        t_hit = np.where(hit, t_hit, np.inf)
        box_idx = np.argmin(t_hit, axis=1)
        box_t = t_hit[np.arange(n_rays), box_idx]
        better = box_t < best_t
        best_t[better] = box_t[better]
        best_label[better] = box_idx[better]

    # ground plane z = 0
    dz = dirs_w[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ground = np.where(dz < 0.0, -config.mount_height / dz, np.inf)
    better = t_ground < best_t
    best_t[better] = t_ground[better]
    best_label[better] = -2

    reflected = best_t <= config.max_range
    # sensor-frame hit positions (z relative to the mount); unreflected rows unused
    hits_s = dirs_s * np.where(reflected, best_t, 0.0)[:, None]

    scan: list[ScanPoint] = []
    for i in range(n_rays):
        if reflected[i]:
            lab = GROUND if best_label[i] == -2 else labels[best_label[i]]
            scan.append(ScanPoint(float(hits_s[i, 0]), float(hits_s[i, 1]),
                                  float(hits_s[i, 2]), lab, True))
        else:
            scan.append(ScanPoint(float(dirs_s[i, 0]), float(dirs_s[i, 1]),
                                  float(dirs_s[i, 2]), None, False))
    return scan


def filter_scan(scan: list[ScanPoint], height_threshold: float = 2.5,
                mount_height: float = 0.0) -> list[ScanPoint]:
    """Drop ground and dynamic returns plus overhanging static points.

    A static point is overhanging when its world height (sensor z plus
    mount height) exceeds height_threshold. Unreflected beams pass through
    untouched; the result is idempotent under re-filtering.
    """
    out = []
    for p in scan:
        if not p.reflected:
            out.append(p)
        elif p.label == STATIC and p.z + mount_height <= height_threshold:
            out.append(p)
    return out


def downsample_scan(scan: list[ScanPoint], k: int) -> list[ScanPoint]:
    """Keep every k-th point (indices 0, k, 2k, ...)."""
    if k < 1:
        raise ValueError("downsample step k must be >= 1")
    return scan[::k]


def reflected_xy(scan: list[ScanPoint]) -> np.ndarray:
    """(n, 2) sensor-frame ground-plane coordinates of reflected points."""
    return np.array([[p.x, p.y] for p in scan if p.reflected], dtype=float).reshape(-1, 2)
