"""Shared 2D/3D geometry: poses, polar conversion, hulls, rasterization, Bezier.

World frame convention used everywhere in this package: x points east,
y points north, yaw is measured counter-clockwise from +x in radians.
Grid cells are addressed as (row, col) where row grows north and col
grows east; the continuous cell coordinate of cell (r, c)'s center is
(c + 0.5, r + 0.5).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def wrap_angle(angle: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    return float((angle + math.pi) % (2.0 * math.pi) - math.pi)


@dataclass(frozen=True)
class Pose2D:
    """Planar pose: position in meters, yaw in radians (CCW from +x)."""

    x: float
    y: float
    yaw: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def distance_to(self, other: "Pose2D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class PolarPoint:
    """Spherical coordinates: range rho >= 0, azimuth theta, elevation phi."""

    rho: float
    theta: float
    phi: float


@dataclass(frozen=True, order=True)
class GridIndex:
    row: int
    col: int


def cart_to_polar(points: Iterable[Sequence[float]]) -> list[PolarPoint]:
    """Convert 3D cartesian points to (rho, theta, phi).

    theta = atan2(y, x), phi = asin(z / rho); phi is 0 at rho = 0.
    """
    out = []
    for x, y, z in points:
        rho = math.sqrt(x * x + y * y + z * z)
        theta = math.atan2(y, x)
        phi = math.asin(max(-1.0, min(1.0, z / rho))) if rho > 0.0 else 0.0
        out.append(PolarPoint(rho, theta, phi))
    return out


def polar_to_cart(points: Iterable[PolarPoint]) -> list[tuple[float, float, float]]:
    """Inverse of cart_to_polar."""
    out = []
    for p in points:
        ce = math.cos(p.phi)
        out.append((p.rho * ce * math.cos(p.theta),
                    p.rho * ce * math.sin(p.theta),
                    p.rho * math.sin(p.phi)))
    return out


def convex_hull(points: Sequence[Sequence[float]]) -> np.ndarray:
    """Counter-clockwise convex hull via the monotone chain construction.

    Collinear points on the boundary are dropped. Degenerate inputs give a
    1- or 2-vertex "hull"; empty input gives an empty array. Runs in
    O(n log n), which matters because affected-area timing is benchmarked.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return pts
    uniq = np.unique(pts, axis=0)  # sorts lexicographically (x, then y)
    if uniq.shape[0] <= 2:
        return uniq

    def half(chain_pts):
        chain: list[np.ndarray] = []
        for p in chain_pts:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(uniq)
    upper = half(uniq[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.array(hull)


def polygon_contains(polygon: np.ndarray, px: np.ndarray, py: np.ndarray,
                     eps: float = 1e-9) -> np.ndarray:
    """Vectorized even-odd point-in-polygon test, boundary-inclusive.

    Points within eps of any edge count as inside. Accumulates crossing
    parity edge by edge so memory stays O(n_points).
    """
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    n = polygon.shape[0]
    inside = np.zeros(px.shape, dtype=bool)
    boundary = np.zeros(px.shape, dtype=bool)
    if n == 0:
        return inside
    if n == 1:
        return (np.abs(px - polygon[0, 0]) <= eps) & (np.abs(py - polygon[0, 1]) <= eps)
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        # crossing-number parity (half-open rule on y)
        cond = (y1 > py) != (y2 > py)
        if np.any(cond):
            t = (py[cond] - y1) / (y2 - y1)
            x_int = x1 + t * (x2 - x1)
            hits = np.zeros(px.shape, dtype=bool)
            hits[cond] = px[cond] < x_int
            inside ^= hits
        # distance to the segment for boundary inclusion
        dx, dy = x2 - x1, y2 - y1
        L2 = dx * dx + dy * dy
        if L2 == 0.0:
            d2 = (px - x1) ** 2 + (py - y1) ** 2
        else:
            t = np.clip(((px - x1) * dx + (py - y1) * dy) / L2, 0.0, 1.0)
            d2 = (px - (x1 + t * dx)) ** 2 + (py - (y1 + t * dy)) ** 2
        boundary |= d2 <= eps * eps
    return inside | boundary


def rasterize_region(polygon: np.ndarray, rows: int, cols: int,
                     eps: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Cells of a rows x cols grid whose centers lie in/on the polygon.

    Polygon vertices are given in continuous cell coordinates (col-axis
    first). Returns (row_indices, col_indices) clipped to the grid.
    """
    poly = np.asarray(polygon, dtype=float).reshape(-1, 2)
    if poly.shape[0] == 0:
        e = np.empty(0, dtype=int)
        return e, e
    c_lo = max(0, int(math.floor(poly[:, 0].min() - 0.5)))
    c_hi = min(cols - 1, int(math.ceil(poly[:, 0].max() - 0.5)))
    r_lo = max(0, int(math.floor(poly[:, 1].min() - 0.5)))
    r_hi = min(rows - 1, int(math.ceil(poly[:, 1].max() - 0.5)))
    if c_lo > c_hi or r_lo > r_hi:
        e = np.empty(0, dtype=int)
        return e, e
    cc, rr = np.meshgrid(np.arange(c_lo, c_hi + 1), np.arange(r_lo, r_hi + 1))
    keep = polygon_contains(poly, cc.ravel() + 0.5, rr.ravel() + 0.5, eps=eps)
    return rr.ravel()[keep], cc.ravel()[keep]


def bezier_sample(control_points: Sequence[Sequence[float]], n_samples: int) -> np.ndarray:
    """Sample a single Bezier curve of degree len(control_points)-1.

    Evaluated at n_samples uniformly spaced parameter values including both
    endpoints, so sample 0 and sample -1 equal the first and last control
    point exactly.
    """
    ctrl = np.asarray(control_points, dtype=float)
    if ctrl.ndim != 2 or ctrl.shape[0] < 2:
        raise ValueError("bezier_sample needs at least 2 control points")
    if n_samples < 2:
        raise ValueError("bezier_sample needs n_samples >= 2")
    n = ctrl.shape[0] - 1
    t = np.linspace(0.0, 1.0, n_samples)
    out = np.zeros((n_samples, ctrl.shape[1]))
    for i in range(n + 1):
        basis = math.comb(n, i) * t ** i * (1.0 - t) ** (n - i)
        out += basis[:, None] * ctrl[i]
    return out


def resample_polyline(points: np.ndarray, max_spacing: float) -> np.ndarray:
    """Resample a polyline at equidistant arc-length steps <= max_spacing."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 2:
        return pts.copy()
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total <= 0.0:
        return pts[:1].copy()
    n = max(2, int(math.ceil(total / max_spacing)) + 1)
    si = np.linspace(0.0, total, n)
    return np.column_stack([np.interp(si, s, pts[:, k]) for k in range(pts.shape[1])])
