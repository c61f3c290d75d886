import math

import numpy as np
import pytest

from gridnav.geometry import GridIndex, Pose2D
from gridnav.lidar import ScanPoint
from gridnav.ogm import (HULL, POLYGON, OccupancyGrid, OgmParams, PositionCircle,
                         affected_area, export_map_pgm, export_map_raw,
                         occupancy_probability, position_circle, prepare_beams,
                         slice_occupied_count, update)
from reference import ogm_update_oracle


def small_params(**kw) -> OgmParams:
    defaults = dict(resolution=0.5, side=81)
    defaults.update(kw)
    return OgmParams(**defaults)


def ring_scan(radius=10.0, step_deg=10, z=1.0):
    return [ScanPoint(radius * math.cos(math.radians(d)),
                      radius * math.sin(math.radians(d)), z, "static", True)
            for d in range(0, 360, step_deg)]


def random_scan(rng, n=40, r_lo=2.0, r_hi=18.0):
    ang = rng.uniform(-math.pi, math.pi, n)
    rad = rng.uniform(r_lo, r_hi, n)
    return [ScanPoint(float(r * math.cos(a)), float(r * math.sin(a)), 1.0,
                      "static", True) for r, a in zip(rad, ang)]


class TestPositionCircle:
    def test_radius_saturates(self):
        pc = PositionCircle(center=80.0, r_max=40.0, s_ref=20.0)
        assert pc.radius(0.0) == 0.0
        assert pc.radius(10.0) == pytest.approx(20.0)
        assert pc.radius(50.0) == pytest.approx(40.0)

    def test_vehicle_sits_behind_center(self):
        pc = PositionCircle(center=80.0, r_max=40.0)
        pt = pc.point_for(yaw=0.0, speed=20.0)
        assert pt == pytest.approx([40.0, 80.0])  # full radius west of center

    def test_stationary_no_shift(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[10, 20] = 5.0
        pose = Pose2D(0, 0, 0)
        position_circle(0.0, pose, pose, (grid.local_u, grid.local_v), grid)
        assert grid.cells[10, 20] == 5.0
        assert (grid.local_u, grid.local_v) == (40.5, 40.5)

    def test_integer_eastward_motion_shifts_left(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[40, 50] = 3.0
        position_circle(0.0, Pose2D(1.0, 0, 0), Pose2D(0, 0, 0),
                        (grid.local_u, grid.local_v), grid)
        # +1.0 m = +2 cells: content moves 2 columns toward the origin
        assert grid.cells[40, 48] == 3.0
        assert grid.cells[40, 50] == 0.0
        assert grid.local_u == pytest.approx(40.5)

    def test_fractional_motion_keeps_landmark_world_position(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        landmark_w = np.array([5.0, 2.0])
        lu, lv = grid.world_to_local(landmark_w)
        cell = grid.cell_of_local(lu, lv)
        grid.cells[cell.row, cell.col] = 7.0
        position_circle(0.0, Pose2D(0.65, 0, 0), Pose2D(0, 0, 0),
                        (grid.local_u, grid.local_v), grid)
        assert grid.local_u == pytest.approx(40.5 + 0.3)
        lu2, lv2 = grid.world_to_local(landmark_w)
        cell2 = grid.cell_of_local(lu2, lv2)
        assert grid.cells[cell2.row, cell2.col] == 7.0
        recon = grid.local_to_world((cell2.col + 0.5, cell2.row + 0.5))
        assert np.linalg.norm(recon - landmark_w) <= 0.5

    def test_teleport_resets(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[:] = 4.0
        position_circle(0.0, Pose2D(1000.0, 0, 0), Pose2D(0, 0, 0),
                        (grid.local_u, grid.local_v), grid)
        assert np.all(grid.cells == 0.0)

    def test_landmark_tracked_through_random_walk(self):
        rng = np.random.default_rng(5)
        grid = OccupancyGrid.create(small_params(side=101), Pose2D(0, 0, 0))
        landmark_w = np.array([3.0, -2.0])
        lu, lv = grid.world_to_local(landmark_w)
        cell = grid.cell_of_local(lu, lv)
        grid.cells[cell.row, cell.col] = 9.0
        pose = Pose2D(0, 0, 0)
        for _ in range(300):
            yaw = float(rng.uniform(-math.pi, math.pi))
            speed = float(rng.uniform(0, 20))
            step = speed * 0.05
            nx, ny = pose.x + step * math.cos(yaw), pose.y + step * math.sin(yaw)
            # bounce off a 10 m box around the landmark to stay in range
            if abs(nx - landmark_w[0]) > 10 or abs(ny - landmark_w[1]) > 10:
                continue
            new_pose = Pose2D(nx, ny, yaw)
            position_circle(speed, new_pose, pose, (grid.local_u, grid.local_v), grid)
            pose = new_pose
            lu, lv = grid.world_to_local(landmark_w)
            c = grid.cell_of_local(lu, lv)
            assert grid.cells[c.row, c.col] == 9.0
            recon = grid.local_to_world((c.col + 0.5, c.row + 0.5))
            assert np.linalg.norm(recon - landmark_w) <= 0.5


class TestUpdate:
    def test_single_beam_bands(self):
        """Ring scan at 10 m: free below the return, occupied one wall depth past it."""
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        update(grid, ring_scan(), Pose2D(0, 0, 0), Pose2D(0, 0, 0), 0.0)
        row = 40  # along the +x beam
        assert grid.cells[row, 44] == pytest.approx(-0.7)   # 2.0 m
        assert grid.cells[row, 58] == pytest.approx(-0.7)   # 9.0 m
        assert grid.cells[row, 59] == pytest.approx(-0.7)   # 9.5 m
        assert grid.cells[row, 60] == pytest.approx(0.9)    # 10.0 m: band start
        assert grid.cells[row, 62] == pytest.approx(0.9)    # 11.0 m: band end
        assert grid.cells[row, 63] == 0.0                   # past the wall depth

    def test_between_beams_gets_free_decrement(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        update(grid, ring_scan(), Pose2D(0, 0, 0), Pose2D(0, 0, 0), 0.0)
        ang, d = math.radians(5.0), 8.0   # halfway between the 0 and 10 deg beams
        u = grid.local_u + d * math.cos(ang) / 0.5
        v = grid.local_v + d * math.sin(ang) / 0.5
        assert grid.cells[int(v), int(u)] == pytest.approx(-0.7)

    def test_cell_outside_area_unchanged(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        update(grid, ring_scan(), Pose2D(0, 0, 0), Pose2D(0, 0, 0), 0.0)
        assert grid.cells[40, 64] == 0.0   # 11.5 m: beyond every extended return

    def test_empty_scan_only_motion(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[40, 50] = 2.0
        update(grid, [], Pose2D(1.0, 0, 0), Pose2D(0, 0, 0), 0.0)
        assert grid.cells[40, 48] == 2.0
        assert np.count_nonzero(grid.cells) == 1

    def test_matches_bruteforce_oracle_random_scans(self):
        rng = np.random.default_rng(123)
        for mode in (HULL, POLYGON):
            params = small_params(side=41, area_mode=mode)
            for _ in range(5):
                grid = OccupancyGrid.create(params, Pose2D(0, 0, 0))
                grid.cells[:] = rng.uniform(-1, 1, grid.cells.shape)
                before = grid.cells.copy()
                scan = random_scan(rng, n=30, r_hi=9.0)
                yaw = float(rng.uniform(-math.pi, math.pi))
                pose = Pose2D(0, 0, yaw)
                grid.local_yaw = yaw
                expected = ogm_update_oracle(before, params, grid.local_u,
                                             grid.local_v, yaw,
                                             [(p.x, p.y) for p in scan])
                update(grid, scan, pose, pose, 0.0)
                assert np.abs(grid.cells - expected).max() <= 1e-9

    def test_polygon_cells_subset_of_hull_cells(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            scan = random_scan(rng, n=50)
            pose = Pose2D(0, 0, 0)
            cells = {}
            for mode in (HULL, POLYGON):
                grid = OccupancyGrid.create(small_params(area_mode=mode), pose)
                beams = prepare_beams(scan, grid.local_yaw, grid.params.wall_depth)
                rows, cols = affected_area(beams, grid, mode)
                cells[mode] = set(zip(rows.tolist(), cols.tolist()))
            assert cells[POLYGON] <= cells[HULL]

    def test_values_agree_on_area_intersection(self):
        rng = np.random.default_rng(99)
        scan = random_scan(rng, n=50)
        pose = Pose2D(0, 0, 0)
        grids = {}
        for mode in (HULL, POLYGON):
            g = OccupancyGrid.create(small_params(area_mode=mode), pose)
            update(g, scan, pose, pose, 0.0)
            grids[mode] = g
        touched_polygon = grids[POLYGON].cells != 0.0
        diff = grids[HULL].cells[touched_polygon] - grids[POLYGON].cells[touched_polygon]
        assert np.abs(diff).max() == 0.0

    def test_clamping(self):
        params = small_params(log_clamp=2.0)
        grid = OccupancyGrid.create(params, Pose2D(0, 0, 0))
        pose = Pose2D(0, 0, 0)
        for _ in range(5):
            update(grid, ring_scan(), pose, pose, 0.0)
        assert grid.cells.max() <= 2.0
        assert grid.cells.min() >= -2.0
        assert grid.cells.max() == 2.0  # band cells saturate at the clamp


class TestQueries:
    def test_probability_values(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        assert occupancy_probability(grid, GridIndex(0, 0)) == 0.5
        grid.cells[3, 4] = 10.0
        assert occupancy_probability(grid, GridIndex(3, 4)) == \
            pytest.approx(0.999954602131297565, abs=1e-12)
        grid.cells[3, 4] = 0.9
        assert occupancy_probability(grid, GridIndex(3, 4)) == \
            pytest.approx(0.710949502625003963, abs=1e-12)

    def test_probability_out_of_bounds(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        with pytest.raises(IndexError):
            occupancy_probability(grid, GridIndex(-1, 0))

    def test_slice_count_empty(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        assert slice_occupied_count(grid, (40.5, 40.5), 2.0, 0.65) == 0

    def test_slice_count_saturated_is_sixteen(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[:] = 10.0
        # window of 2 m at 0.5 m cells is always exactly 4x4 cells
        for point in [(40.5, 40.5), (40.0, 40.0), (40.2, 40.8)]:
            assert slice_occupied_count(grid, point, 2.0, 0.65) == 16

    def test_slice_count_clipped_at_edge(self):
        grid = OccupancyGrid.create(small_params(), Pose2D(0, 0, 0))
        grid.cells[:] = 10.0
        # centered 1 cell from the west edge: half the columns are off-grid
        assert slice_occupied_count(grid, (1.0, 40.5), 2.0, 0.65) == 3 * 4


class TestExports:
    def test_pgm_uniform_unknown(self):
        grid = OccupancyGrid.create(small_params(side=4), Pose2D(0, 0, 0))
        pgm = export_map_pgm(grid)
        pixels = pgm.split(b"\n", 3)[3]
        assert set(pixels) == {128}

    def test_pgm_extremes_and_orientation(self):
        grid = OccupancyGrid.create(small_params(side=4), Pose2D(0, 0, 0))
        grid.cells[0, 1] = 10.0    # internal row 0 = south
        grid.cells[3, 2] = -10.0
        pgm = export_map_pgm(grid)
        arr = np.frombuffer(pgm.split(b"\n", 3)[3], dtype=np.uint8).reshape(4, 4)
        assert arr[3, 1] == 255    # south row lands at the image bottom
        assert arr[0, 2] == 0
        assert arr[1, 1] == 128

    def test_raw_dump_round_trip(self):
        grid = OccupancyGrid.create(small_params(side=8), Pose2D(0, 0, 0))
        grid.cells[2, 5] = 1.6
        raw = export_map_raw(grid)
        header = np.frombuffer(raw[:32], dtype="<f4")
        assert header[0] == 8 and header[1] == pytest.approx(0.5)
        assert header[2] == pytest.approx(grid.local_u)
        cells = np.frombuffer(raw[32:], dtype="<f4").reshape(8, 8)
        assert cells[2, 5] == pytest.approx(1.6)


class TestNoRotationInvariant:
    def test_values_are_exact_increment_combinations(self):
        rng = np.random.default_rng(31)
        params = small_params(side=61)
        grid = OccupancyGrid.create(params, Pose2D(0, 0, 0))
        pose = Pose2D(0, 0, 0)
        for k in range(30):
            yaw = float(rng.uniform(-math.pi, math.pi))
            speed = float(rng.uniform(0, 20))
            step = speed * 0.05
            new_pose = Pose2D(pose.x + step * math.cos(yaw),
                              pose.y + step * math.sin(yaw), yaw)
            scan = random_scan(rng, n=25, r_hi=10.0)
            update(grid, scan, new_pose, pose, speed)
            pose = new_pose
        scaled = grid.cells * 10.0
        nearest = np.round(scaled)
        # every value is a multiple of 0.1 within float error -> it is an
        # integer combination a*0.9 - b*0.7 (9a - 7b spans all integers)
        assert np.abs(scaled - nearest).max() <= 1e-6
        assert np.abs(grid.cells).max() <= params.log_clamp
