"""Benchmark metrics: per-scenario results and aggregate summaries."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

KMH10_MPS = 10_000.0 / 3_600.0


def deadline_for(shortest_route_length: float) -> float:
    """Seconds allowed: time to cover the shortest route at 10 km/h."""
    if shortest_route_length < 0.0:
        raise ValueError("route length must be >= 0")
    return shortest_route_length / KMH10_MPS


@dataclass
class Metrics:
    scenario_id: str
    success: bool
    time_used: float
    deadline: float
    distance_to_goal_pct: float
    km_traveled: float
    static_collisions: int = 0
    off_road_events: int = 0
    replans: int = 0
    planning_failure: bool = False
    detection_ranges: list[float] = field(default_factory=list)
    reroute_mandatory: bool = False
    has_alternate: bool = True


CSV_HEADER = ("scenario_id,success,planning_failure,time_used_s,deadline_s,"
              "distance_to_goal_pct,km_traveled,static_collisions,off_road_events,"
              "replans,mean_detection_range_m,n_detections,reroute_mandatory,"
              "has_alternate")


def metrics_to_csv(rows: list[Metrics]) -> str:
    """One row per scenario, stable float formatting for reproducible files."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for m in sorted(rows, key=lambda r: r.scenario_id):
        mean_rng = (sum(m.detection_ranges) / len(m.detection_ranges)
                    if m.detection_ranges else 0.0)
        buf.write(",".join([
            m.scenario_id,
            str(int(m.success)),
            str(int(m.planning_failure)),
            f"{m.time_used:.6f}",
            f"{m.deadline:.6f}",
            f"{m.distance_to_goal_pct:.6f}",
            f"{m.km_traveled:.6f}",
            str(m.static_collisions),
            str(m.off_road_events),
            str(m.replans),
            f"{mean_rng:.6f}",
            str(len(m.detection_ranges)),
            str(int(m.reroute_mandatory)),
            str(int(m.has_alternate)),
        ]) + "\n")
    return buf.getvalue()


def km_per_infraction(total_km: float, count: int) -> tuple[float, str]:
    """(value, text); an infinite value reads "no infraction over X km"."""
    if count == 0:
        return math.inf, f"no infraction over {total_km:.2f} km"
    v = total_km / count
    return v, f"{v:.3f}"


def compute_metrics(rows: list[Metrics]) -> dict:
    """Aggregate a scenario set into the benchmark summary table."""
    if not rows:
        raise ValueError("no scenario results to aggregate")
    n = len(rows)
    total_km = sum(m.km_traveled for m in rows)
    static = sum(m.static_collisions for m in rows)
    off_road = sum(m.off_road_events for m in rows)
    ranges = [r for m in rows for r in m.detection_ranges]
    km_static, km_static_txt = km_per_infraction(total_km, static)
    km_off, km_off_txt = km_per_infraction(total_km, off_road)
    return {
        "n_scenarios": n,
        "success_rate_pct": 100.0 * sum(m.success for m in rows) / n,
        "mean_distance_to_goal_pct": sum(m.distance_to_goal_pct for m in rows) / n,
        "total_km": total_km,
        "static_collisions": static,
        "km_per_static_collision": km_static,
        "km_per_static_collision_text": km_static_txt,
        "off_road_events": off_road,
        "km_per_off_road": km_off,
        "km_per_off_road_text": km_off_txt,
        "mean_detection_range_m": (sum(ranges) / len(ranges)) if ranges else 0.0,
        "n_detections": len(ranges),
    }


def summary_to_csv(summary: dict) -> str:
    buf = io.StringIO()
    buf.write("metric,value\n")
    for key, value in summary.items():
        if isinstance(value, float) and math.isfinite(value):
            buf.write(f"{key},{value:.6f}\n")
        else:
            buf.write(f"{key},{value}\n")
    return buf.getvalue()
