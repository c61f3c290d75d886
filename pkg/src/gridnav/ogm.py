"""Log-odds occupancy grid with full-scan updates and on-circle positioning.

The grid is square and never rotated: its axes stay aligned with the world
frame for the whole run. Ego motion is compensated by shifting the grid
contents by whole cells only and moving the vehicle's continuous local
position by the fractional remainder, so cell values are only ever touched
by integer shifts and +/- log-odds increments (no interpolation).

Internally cells are indexed (row, col) with row growing north and col
growing east; continuous local coordinates (u, v) are in cell units, the
center of cell (r, c) being (c + 0.5, r + 0.5). Exports flip rows so image
row 0 is map north.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .geometry import GridIndex, Pose2D, convex_hull, rasterize_region
from .lidar import ScanPoint

HULL = "convex_hull"
POLYGON = "polygon"


@dataclass(frozen=True)
class OgmParams:
    resolution: float = 0.5        # meters per cell
    side: int = 160                # cells (square grid)
    log_odd_occ: float = 0.9
    log_odd_free: float = 0.7
    wall_depth: float = 1.0        # assumed obstacle depth behind a return, meters
    beam_width: float = math.radians(2.0)
    log_clamp: float = 10.0
    area_mode: str = HULL

    def __post_init__(self) -> None:
        if self.resolution <= 0.0 or self.side < 3:
            raise ValueError("resolution > 0 and side >= 3 required")
        if self.log_odd_occ <= 0.0 or self.log_odd_free <= 0.0:
            raise ValueError("log-odds increments must be positive")
        if self.wall_depth <= 0.0 or self.beam_width <= 0.0:
            raise ValueError("wall_depth and beam_width must be positive")
        if self.area_mode not in (HULL, POLYGON):
            raise ValueError(f"unknown area_mode {self.area_mode!r}")


@dataclass(frozen=True)
class PositionCircle:
    """Speed-dependent off-center vehicle placement inside the square map.

    The vehicle sits radius(speed) cells behind the map center along its
    heading, so forward coverage grows with speed while the map itself is
    never rotated.
    """

    center: float               # continuous cell coordinate of the map center
    r_max: float                # cells
    s_ref: float = 20.0         # m/s at which the radius saturates

    def radius(self, speed: float) -> float:
        return self.r_max * min(max(speed, 0.0) / self.s_ref, 1.0)

    def point_for(self, yaw: float, speed: float) -> np.ndarray:
        r = self.radius(speed)
        return np.array([self.center - r * math.cos(yaw),
                         self.center - r * math.sin(yaw)])


@dataclass
class OccupancyGrid:
    params: OgmParams
    cells: np.ndarray                 # (side, side) float64 log-odds
    local_u: float                    # vehicle position, continuous cell coords
    local_v: float
    local_yaw: float
    world_pose: Pose2D                # world pose matching the local position
    circle: PositionCircle = field(init=False)

    def __post_init__(self) -> None:
        self.circle = PositionCircle(center=self.params.side / 2.0,
                                     r_max=self.params.side / 4.0)

    @classmethod
    def create(cls, params: OgmParams, world_pose: Pose2D) -> "OccupancyGrid":
        side = params.side
        grid = cls(params=params,
                   cells=np.zeros((side, side)),
                   local_u=side / 2.0, local_v=side / 2.0,
                   local_yaw=world_pose.yaw,
                   world_pose=world_pose)
        start = grid.circle.point_for(world_pose.yaw, 0.0)
        grid.local_u, grid.local_v = float(start[0]), float(start[1])
        return grid

    # ---- coordinate transforms -------------------------------------------

    def world_to_local(self, xy) -> np.ndarray:
        """World meters -> continuous local cell coordinates (u, v)."""
        xy = np.asarray(xy, dtype=float)
        res = self.params.resolution
        off = (xy - self.world_pose.xy) / res
        return np.stack([off[..., 0] + self.local_u, off[..., 1] + self.local_v], axis=-1)

    def local_to_world(self, uv) -> np.ndarray:
        uv = np.asarray(uv, dtype=float)
        res = self.params.resolution
        return np.stack([self.world_pose.x + (uv[..., 0] - self.local_u) * res,
                         self.world_pose.y + (uv[..., 1] - self.local_v) * res], axis=-1)

    def cell_of_local(self, u: float, v: float) -> GridIndex:
        return GridIndex(int(math.floor(v)), int(math.floor(u)))

    def in_bounds(self, cell: GridIndex) -> bool:
        return 0 <= cell.row < self.params.side and 0 <= cell.col < self.params.side

    # ---- queries ----------------------------------------------------------

    def probability(self) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.cells))


def occupancy_probability(grid: OccupancyGrid, cell: GridIndex) -> float:
    """Logistic transform of a cell's log-odds."""
    if not grid.in_bounds(cell):
        raise IndexError(f"cell {cell} out of bounds for side {grid.params.side}")
    return 1.0 / (1.0 + math.exp(-grid.cells[cell.row, cell.col]))


def slice_occupied_count(grid: OccupancyGrid, point_uv, slice_width: float,
                         p_occ: float) -> int:
    """Occupied-cell count in a square window centered at a local point.

    The window is slice_width x slice_width meters, half-open on cell
    centers so a window of k cells always covers exactly k columns/rows
    (before clipping at the grid edge). Occupied means probability > p_occ.
    """
    if slice_width <= 0.0:
        raise ValueError("slice_width must be > 0")
    res = grid.params.resolution
    hw = slice_width / 2.0 / res
    u, v = float(point_uv[0]), float(point_uv[1])
    c_lo = int(math.ceil(u - hw - 0.5))
    c_hi = int(math.ceil(u + hw - 0.5))   # exclusive
    r_lo = int(math.ceil(v - hw - 0.5))
    r_hi = int(math.ceil(v + hw - 0.5))
    side = grid.params.side
    c_lo, c_hi = max(0, c_lo), min(side, c_hi)
    r_lo, r_hi = max(0, r_lo), min(side, r_hi)
    if c_lo >= c_hi or r_lo >= r_hi:
        return 0
    thresh = math.log(p_occ / (1.0 - p_occ))
    return int(np.count_nonzero(grid.cells[r_lo:r_hi, c_lo:c_hi] > thresh))


# ---- Vehicle-on-a-circle motion compensation -----------------------------

def _shift_cells(cells: np.ndarray, dr: int, dc: int) -> None:
    """new[r, c] = old[r + dr, c + dc]; exposed cells become log-odds 0."""
    side = cells.shape[0]
    if abs(dr) >= side or abs(dc) >= side:
        cells[:] = 0.0
        return
    if dr == 0 and dc == 0:
        return
    out = np.zeros_like(cells)
    r_lo, r_hi = max(0, -dr), min(side, side - dr)
    c_lo, c_hi = max(0, -dc), min(side, side - dc)
    out[r_lo:r_hi, c_lo:c_hi] = cells[r_lo + dr:r_hi + dr, c_lo + dc:c_hi + dc]
    cells[:] = out


def position_circle(speed: float, world_pose: Pose2D, prev_world_pose: Pose2D,
                    prev_local: tuple[float, float], grid: OccupancyGrid) -> OccupancyGrid:
    """Compensate ego motion: integer-cell grid shift + fractional local move.

    The vehicle's new local position is the circle point for (yaw, speed)
    plus the fractional part of the required shift, so a static landmark's
    cell travels by exactly the integer part and world<->local round-trips
    stay consistent.
    """
    res = grid.params.resolution
    target = grid.circle.point_for(world_pose.yaw, speed)
    shift_u = (world_pose.x - prev_world_pose.x) / res + prev_local[0] - target[0]
    shift_v = (world_pose.y - prev_world_pose.y) / res + prev_local[1] - target[1]
    int_u, int_v = math.floor(shift_u), math.floor(shift_v)
    _shift_cells(grid.cells, int_v, int_u)
    grid.local_u = float(target[0] + (shift_u - int_u))
    grid.local_v = float(target[1] + (shift_v - int_v))
    grid.local_yaw = world_pose.yaw
    grid.world_pose = world_pose
    return grid


# ---- Full-scan inverse sensor model --------------------------------------

@dataclass
class BeamSet:
    """Reflected returns prepared for the per-cell update.

    Kept in vehicle-relative map-aligned meters. Beams sharing the exact
    same angle are merged keeping the minimum distance, so nearest-beam
    lookups are well defined.
    """

    angles: np.ndarray      # sorted, strictly increasing
    dists: np.ndarray       # extended by wall_depth, meters
    ext_xy: np.ndarray      # extended endpoints of all beams (pre-merge)


def prepare_beams(scan: list[ScanPoint], local_yaw: float, wall_depth: float) -> Optional[BeamSet]:
    """Rotate reflected points into the map frame and extend by wall_depth."""
    pts = np.array([[p.x, p.y] for p in scan if p.reflected], dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return None
    cy, sy = math.cos(local_yaw), math.sin(local_yaw)
    dx = pts[:, 0] * cy - pts[:, 1] * sy
    dy = pts[:, 0] * sy + pts[:, 1] * cy
    r2d = np.hypot(dx, dy)
    keep = r2d > 0.0
    dx, dy = dx[keep], dy[keep]
    if dx.shape[0] == 0:
        return None
    angles = np.arctan2(dy, dx)
    ex = dx + wall_depth * np.cos(angles)
    ey = dy + wall_depth * np.sin(angles)
    dists = np.hypot(ex, ey)

    order = np.argsort(angles, kind="stable")
    a_s, d_s = angles[order], dists[order]
    # merge beams with bit-identical angles, keeping the nearest return
    first = np.ones(a_s.shape[0], dtype=bool)
    first[1:] = a_s[1:] != a_s[:-1]
    seg_min = np.minimum.reduceat(d_s, np.flatnonzero(first))
    return BeamSet(angles=a_s[first], dists=seg_min, ext_xy=np.column_stack([ex, ey]))


def affected_area(beams: BeamSet, grid: OccupancyGrid, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Cells a full scan may update: hull or angle-ordered bounding polygon.

    Returns (rows, cols) of cells whose centers fall inside the region,
    clipped to the grid.
    """
    res = grid.params.resolution
    pu = grid.local_u + beams.ext_xy[:, 0] / res
    pv = grid.local_v + beams.ext_xy[:, 1] / res
    pts = np.column_stack([pu, pv])
    if mode == HULL:
        region = convex_hull(pts)
    else:
        ang = np.arctan2(beams.ext_xy[:, 1], beams.ext_xy[:, 0])
        region = pts[np.argsort(ang, kind="stable")]
    return rasterize_region(region, grid.params.side, grid.params.side)


class _RangeMin:
    """Sparse table for O(1) range-minimum queries over a static array."""

    def __init__(self, values: np.ndarray) -> None:
        self.tables = [values]
        size = 1
        while 2 * size <= values.shape[0]:
            prev = self.tables[-1]
            self.tables.append(np.minimum(prev[:-size], prev[size:]))
            size *= 2

    def query(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Vectorized min over [lo, hi); every window must be nonempty."""
        span = hi - lo
        k = np.floor(np.log2(span)).astype(int)
        out = np.empty(lo.shape[0])
        for level in np.unique(k):
            m = k == level
            tab = self.tables[level]
            size = 1 << level
            out[m] = np.minimum(tab[lo[m]], tab[hi[m] - size])
        return out


def update(grid: OccupancyGrid, scan: list[ScanPoint], world_pose: Pose2D,
           prev_world_pose: Pose2D, speed: float) -> OccupancyGrid:
    """Full-scan occupancy update.

    Runs the on-circle motion compensation first, then classifies every
    cell of the affected area against the beam set: cells closer than the
    nearest in-beam return get the free decrement, cells within the
    wall-depth band behind it get the occupied increment, and cells with
    no beam within half the beam width fall back to the angularly nearest
    beam for a free decrement only. Everything is clamped to +/- log_clamp.
    """
    p = grid.params
    position_circle(speed, world_pose, prev_world_pose,
                    (grid.local_u, grid.local_v), grid)
    beams = prepare_beams(scan, grid.local_yaw, p.wall_depth)
    if beams is None:
        return grid

    rows, cols = affected_area(beams, grid, p.area_mode)
    if rows.shape[0] == 0:
        return grid
    apply_cell_updates(grid, beams, rows, cols)
    return grid


def apply_cell_updates(grid: OccupancyGrid, beams: BeamSet,
                       rows: np.ndarray, cols: np.ndarray) -> None:
    """Evaluate the per-cell branch logic and add clamped log-odds deltas."""
    p = grid.params
    res = p.resolution
    half_bw = p.beam_width / 2.0

    mx = (cols + 0.5 - grid.local_u) * res
    my = (rows + 0.5 - grid.local_v) * res
    cell_dist = np.hypot(mx, my)
    cell_angle = np.arctan2(my, mx)

    m = beams.angles.shape[0]
    pad_angles = np.concatenate([beams.angles - 2.0 * math.pi, beams.angles,
                                 beams.angles + 2.0 * math.pi])
    pad_dists = np.tile(beams.dists, 3)
    rmq = _RangeMin(pad_dists)

    lo = np.searchsorted(pad_angles, cell_angle - half_bw, side="right")
    hi = np.searchsorted(pad_angles, cell_angle + half_bw, side="left")
    has_beam = hi > lo

    delta = np.zeros(rows.shape[0])
    if np.any(has_beam):
        d_min = rmq.query(lo[has_beam], hi[has_beam])
        cd = cell_dist[has_beam]
        sub = np.zeros(d_min.shape[0])
        sub[cd < d_min - p.wall_depth] = -p.log_odd_free
        band = (cd >= d_min - p.wall_depth) & (cd <= d_min)
        sub[band] = p.log_odd_occ
        delta[has_beam] = sub

    no_beam = ~has_beam
    if np.any(no_beam):
        ca = cell_angle[no_beam]
        idx = np.searchsorted(pad_angles, ca)
        left = np.clip(idx - 1, 0, 3 * m - 1)
        right = np.clip(idx, 0, 3 * m - 1)
        dl = np.abs(pad_angles[left] - ca)
        dr = np.abs(pad_angles[right] - ca)
        # nearest angle wins; exact angular ties fall back to nearer return
        use_left = (dl < dr) | ((dl == dr) & (pad_dists[left] <= pad_dists[right]))
        nearest = np.where(use_left, left, right)
        free = cell_dist[no_beam] < pad_dists[nearest]
        sub = np.zeros(ca.shape[0])
        sub[free] = -p.log_odd_free
        delta[no_beam] = sub

    vals = grid.cells[rows, cols] + delta
    grid.cells[rows, cols] = np.clip(vals, -p.log_clamp, p.log_clamp)


# ---- exports --------------------------------------------------------------

def export_map_pgm(grid: OccupancyGrid) -> bytes:
    """8-bit binary PGM, pixel = round(255 * occupancy probability), row 0 = north."""
    prob = grid.probability()
    pix = np.clip(np.floor(255.0 * prob + 0.5), 0, 255).astype(np.uint8)
    pix = pix[::-1]  # internal row 0 is south
    h, w = pix.shape
    return b"P5\n%d %d\n255\n" % (w, h) + pix.tobytes()


def export_map_raw(grid: OccupancyGrid) -> bytes:
    """Little-endian float32 dump: 8-value header then cells row-major.

    Header: side, resolution, local u, local v, local yaw, clamp, occ, free.
    Cell rows are in internal order (row 0 = map south).
    """
    p = grid.params
    header = np.array([p.side, p.resolution, grid.local_u, grid.local_v,
                       grid.local_yaw, p.log_clamp, p.log_odd_occ, p.log_odd_free],
                      dtype="<f4")
    return header.tobytes() + grid.cells.astype("<f4").tobytes()
