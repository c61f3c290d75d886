import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from gridnav.geometry import Pose2D
from gridnav.harness.bench import bench_affected_area, load_scan_corpus, \
    make_scan_corpus, save_scan_corpus
from gridnav.harness.config import SimConfig, default_config_yaml, load_config
from gridnav.harness.generate import generate_blockage_scenarios
from gridnav.harness.metrics import Metrics, compute_metrics, deadline_for, \
    metrics_to_csv, summary_to_csv
from gridnav.harness.runner import footprint_overlaps, run_scenario
from gridnav.harness.scenario import FULL, PARTIAL, Scenario, ScenarioBlockage, \
    load_scenarios, save_scenarios
from gridnav.harness.towns import build_town1, build_town2, resolve_town
from gridnav.planner.graph import build_world_graph
from gridnav.world import ObstacleBox, load_world, save_world


class TestDeadline:
    def test_values(self):
        assert deadline_for(500.0) == pytest.approx(180.0)
        assert deadline_for(1000.0) == pytest.approx(360.0)
        assert deadline_for(0.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            deadline_for(-1.0)


class TestTowns:
    def test_intersection_counts(self):
        assert len(build_world_graph(build_town1().roads).intersections) == 7
        assert len(build_world_graph(build_town2().roads).intersections) == 12

    def test_buildings_clear_of_roads(self):
        for world in (build_town1(), build_town2()):
            for ob in world.obstacles:
                for corner in [(ob.cx - ob.hx, ob.cy - ob.hy),
                               (ob.cx + ob.hx, ob.cy + ob.hy),
                               (ob.cx - ob.hx, ob.cy + ob.hy),
                               (ob.cx + ob.hx, ob.cy - ob.hy)]:
                    assert not world.on_road(*corner)

    def test_packaged_towns_resolve(self):
        for name in ("town1", "town2", "loop"):
            world = resolve_town(name)
            assert world.roads

    def test_world_yaml_round_trip(self, tmp_path):
        world = build_town1()
        p = tmp_path / "t.yaml"
        save_world(world, p)
        back = load_world(p)
        assert back.roads == world.roads
        assert back.obstacles == world.obstacles


class TestScenarioIO:
    def test_round_trip(self, tmp_path):
        sc = Scenario(id="x", start=Pose2D(1, 2, 0.3), dest=Pose2D(4, 5, -0.7),
                      blockages=[ScenarioBlockage(1, 2, 3, 4, 1.5, PARTIAL)],
                      seed=9, reroute_mandatory=True, has_alternate=False)
        p = tmp_path / "s.yaml"
        save_scenarios([sc], p)
        (back,) = load_scenarios(p)
        assert back.id == sc.id and back.seed == 9
        assert back.start == sc.start and back.dest == sc.dest
        assert back.blockages == sc.blockages
        assert back.reroute_mandatory and not back.has_alternate


class TestGenerate:
    def test_deterministic(self):
        world = build_town1()
        a = generate_blockage_scenarios(world, 8, seed=3)
        b = generate_blockage_scenarios(world, 8, seed=3)
        assert a == b

    def test_split_and_counts(self):
        world = build_town2()
        scenarios = generate_blockage_scenarios(world, 20, seed=1)
        assert len(scenarios) == 20
        assert sum(s.reroute_mandatory for s in scenarios) == 10
        for s in scenarios:
            assert 1 <= len(s.blockages) <= 5
            if s.reroute_mandatory:
                assert any(b.kind == FULL for b in s.blockages)
                assert s.has_alternate
            else:
                assert all(b.kind == PARTIAL for b in s.blockages)

    def test_blockages_sit_on_roads(self):
        world = build_town1()
        for s in generate_blockage_scenarios(world, 6, seed=5):
            for b in s.blockages:
                assert world.on_road(b.cx, b.cy, margin=0.5)


class TestMetrics:
    def rows(self):
        mk = lambda i, ok, km, col: Metrics(scenario_id=f"s{i}", success=ok,
                                            time_used=10.0, deadline=20.0,
                                            distance_to_goal_pct=100.0 if ok else 40.0,
                                            km_traveled=km, static_collisions=col)
        return [mk(0, True, 0.5, 0), mk(1, True, 0.5, 0),
                mk(2, True, 0.5, 1), mk(3, False, 0.5, 0)]

    def test_success_rate(self):
        s = compute_metrics(self.rows())
        assert s["success_rate_pct"] == pytest.approx(75.0)

    def test_km_per_infraction(self):
        s = compute_metrics(self.rows())
        assert s["km_per_static_collision"] == pytest.approx(2.0)
        assert s["km_per_static_collision_text"] == "2.000"

    def test_no_infraction_text(self):
        rows = self.rows()
        for r in rows:
            r.static_collisions = 0
            r.km_traveled = 1.25
        s = compute_metrics(rows)
        assert math.isinf(s["km_per_static_collision"])
        assert s["km_per_static_collision_text"] == "no infraction over 5.00 km"

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            compute_metrics([])

    def test_csv_shapes(self):
        rows = self.rows()
        csv = metrics_to_csv(rows)
        lines = csv.strip().split("\n")
        assert len(lines) == 5
        assert lines[0].startswith("scenario_id,success,")
        s = summary_to_csv(compute_metrics(rows))
        assert s.startswith("metric,value\n")


class TestFootprint:
    def test_overlap_and_clearance(self):
        box = ObstacleBox(10.0, 0.0, 1.0, 1.0, height=2.0)
        assert footprint_overlaps(Pose2D(8.0, 0.0, 0.0), box)      # nose touches
        assert not footprint_overlaps(Pose2D(5.0, 0.0, 0.0), box)
        # oriented: the rotated vehicle's right edge cuts the box's west face
        assert footprint_overlaps(Pose2D(8.5, 1.0, math.pi / 4), box)
        # rotated but passing just above the corner: separated
        assert not footprint_overlaps(Pose2D(8.2, 1.8, math.pi / 4), box)


class TestRunScenario:
    def test_start_equals_dest_immediate_success(self):
        world = resolve_town("loop")
        pose = Pose2D(-60.0, 78.25, 0.0)
        sc = Scenario(id="trivial", start=pose, dest=pose)
        res = run_scenario(world, sc, SimConfig())
        m = res.metrics
        assert m.success and m.time_used == 0.0
        assert m.distance_to_goal_pct == 100.0

    def test_deterministic_tick_log(self):
        world = resolve_town("loop")
        sc = Scenario(id="det", start=Pose2D(-60.0, 78.25, 0.0),
                      dest=Pose2D(60.0, 78.25, 0.0),
                      blockages=[ScenarioBlockage(30.0, 78.25, 1.0, 1.55,
                                                  kind=PARTIAL)])
        a = run_scenario(world, sc, SimConfig())
        b = run_scenario(world, sc, SimConfig())
        assert a.tick_log_bytes() == b.tick_log_bytes()

    def test_km_matches_tick_log_integral(self):
        world = resolve_town("loop")
        sc = Scenario(id="km", start=Pose2D(-60.0, 78.25, 0.0),
                      dest=Pose2D(60.0, 78.25, 0.0))
        res = run_scenario(world, sc, SimConfig())
        dt = sc.tick_dt
        integral = sum(r.speed * dt for r in res.ticks) / 1000.0
        assert res.metrics.km_traveled == pytest.approx(integral, rel=1e-3)
        assert res.metrics.success


class TestBenchCorpus:
    def test_corpus_round_trip(self, tmp_path):
        world = build_town1()
        scans, poses = make_scan_corpus(world, 3, seed=0)
        p = tmp_path / "scans.npz"
        save_scan_corpus(scans, poses, p)
        scans2, poses2 = load_scan_corpus(p)
        assert len(scans2) == 3 and len(poses2) == 3
        a = [q for q in scans[0] if q.reflected]
        assert len(a) == len(scans2[0])

    def test_bench_report(self):
        world = build_town1()
        scans, poses = make_scan_corpus(world, 4, seed=1)
        rep = bench_affected_area(scans, poses, repetitions=1)
        assert rep.cells_hull >= rep.cells_polygon
        assert rep.region_time_hull > 0 and rep.update_time_polygon > 0
        csv = rep.to_csv()
        assert "region_ratio" in csv


class TestConfig:
    def test_defaults_carry_published_values(self):
        cfg = SimConfig()
        assert cfg.ogm.log_odd_occ == 0.9
        assert cfg.ogm.log_odd_free == 0.7
        assert cfg.ogm.resolution == 0.5
        assert cfg.ogm.wall_depth == 1.0
        assert cfg.ogm.beam_width == pytest.approx(math.radians(2.0))
        assert cfg.planner.resolution == 8.215
        assert cfg.planner.far_inters == 4
        assert cfg.planner.inter_exited == 1
        assert cfg.blockage.route_pts == 5

    def test_yaml_round_trip_and_overrides(self, tmp_path):
        text = default_config_yaml()
        doc = yaml.safe_load(text)
        assert doc["ogm"]["log_odd_occ"] == 0.9
        p = tmp_path / "cfg.yaml"
        p.write_text("ogm:\n  side: 81\n  beam_width_deg: 4.0\nplanner:\n  wall_mode: removable\n")
        cfg = load_config(p)
        assert cfg.ogm.side == 81
        assert cfg.ogm.beam_width == pytest.approx(math.radians(4.0))
        assert cfg.planner.wall_mode == "removable"
        assert cfg.ogm.log_odd_occ == 0.9   # untouched defaults survive
