"""Closed-loop scenario execution: sense, map, plan, drive, score.

The loop is a fixed-step simulation: raycast -> filter -> occupancy update
-> plan (including blockage detection) -> waypoint follower -> kinematic
integration, with obstacle contact stopping the vehicle. Everything is
deterministic for a given (scenario, config), so tick logs are
byte-reproducible.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..bicycle import bicycle_step
from ..controller import FULL_BRAKE, follow_step
from ..geometry import Pose2D
from ..lidar import downsample_scan, filter_scan, raycast_scan
from ..ogm import OccupancyGrid, update as ogm_update
from ..planner.global_planner import GlobalPlanner, NoRouteError
from ..planner.route import NavCommand
from ..world import ObstacleBox, World
from .config import SimConfig
from .metrics import Metrics, deadline_for
from .scenario import Scenario

VEHICLE_HALF_LENGTH = 2.25
VEHICLE_HALF_WIDTH = 1.0

MAX_ACCEL = 3.0      # m/s^2 at full throttle
MAX_DECEL = 8.0      # m/s^2 at full brake
DRAG = 0.05          # speed damping per second


def footprint_overlaps(pose: Pose2D, box: ObstacleBox,
                       half_len: float = VEHICLE_HALF_LENGTH,
                       half_wid: float = VEHICLE_HALF_WIDTH) -> bool:
    """Oriented vehicle rectangle vs axis-aligned box, separating axes test."""
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    corners = []
    for dl, dw in ((half_len, half_wid), (half_len, -half_wid),
                   (-half_len, -half_wid), (-half_len, half_wid)):
        corners.append((pose.x + dl * c - dw * s, pose.y + dl * s + dw * c))
    axes = [(1.0, 0.0), (0.0, 1.0), (c, s), (-s, c)]
    box_corners = [(box.cx - box.hx, box.cy - box.hy), (box.cx + box.hx, box.cy - box.hy),
                   (box.cx + box.hx, box.cy + box.hy), (box.cx - box.hx, box.cy + box.hy)]
    for ax, ay in axes:
        p1 = [x * ax + y * ay for x, y in corners]
        p2 = [x * ax + y * ay for x, y in box_corners]
        if max(p1) < min(p2) or max(p2) < min(p1):
            return False
    return True


@dataclass
class TickRow:
    tick: int
    t: float
    x: float
    y: float
    yaw: float
    speed: float
    steering: float
    throttle: float
    brake: float
    command: str
    collision: bool
    off_road: bool


TICK_HEADER = "tick,t,x,y,yaw,speed,steering,throttle,brake,command,collision,off_road"


def ticks_to_csv(rows: list[TickRow]) -> str:
    buf = io.StringIO()
    buf.write(TICK_HEADER + "\n")
    for r in rows:
        buf.write(f"{r.tick},{r.t:.6f},{r.x:.6f},{r.y:.6f},{r.yaw:.6f},"
                  f"{r.speed:.6f},{r.steering:.6f},{r.throttle:.6f},{r.brake:.6f},"
                  f"{r.command},{int(r.collision)},{int(r.off_road)}\n")
    return buf.getvalue()


@dataclass
class ScenarioResult:
    metrics: Metrics
    ticks: list[TickRow] = field(default_factory=list)
    grid: OccupancyGrid | None = None
    planner: GlobalPlanner | None = None
    world: World | None = None

    def tick_log_bytes(self) -> bytes:
        return ticks_to_csv(self.ticks).encode()


def run_scenario(world: World, scenario: Scenario, config: SimConfig) -> ScenarioResult:
    """Run one scenario to success, deadline, or planning failure."""
    boxes = [ObstacleBox(b.cx, b.cy, b.hx, b.hy, b.height, "static")
             for b in scenario.blockages]
    sim_world = world.with_obstacles(boxes)
    dt = scenario.tick_dt or config.tick_dt

    planner = GlobalPlanner(sim_world, scenario.dest, config.planner,
                            config.blockage, avoidance_enabled=config.avoidance_enabled)
    grid = OccupancyGrid.create(config.ogm, scenario.start)

    try:
        nominal = planner.shortest_route_length(scenario.start)
    except NoRouteError:
        metrics = Metrics(scenario_id=scenario.id, success=False, time_used=0.0,
                          deadline=0.0, distance_to_goal_pct=0.0, km_traveled=0.0,
                          planning_failure=True,
                          reroute_mandatory=scenario.reroute_mandatory,
                          has_alternate=scenario.has_alternate)
        return ScenarioResult(metrics=metrics, grid=grid, planner=planner, world=sim_world)
    deadline = deadline_for(nominal)

    pose = scenario.start
    speed = 0.0
    dist_m = 0.0
    success = False
    planning_failure = False
    collisions = 0
    off_road_events = 0
    last_contact: tuple[float, float] | None = None
    was_off_road = False
    rows: list[TickRow] = []

    tick = 0
    max_ticks = int(math.ceil(deadline / dt)) + 1
    while tick <= max_ticks:
        t = tick * dt
        if t > deadline and tick > 0:
            break

        if tick % config.sensor_period == 0:
            scan = raycast_scan(sim_world, pose, config.lidar)
            scan = filter_scan(scan, config.filter_height, config.lidar.mount_height)
            scan = downsample_scan(scan, config.downsample)
            ogm_update(grid, scan, pose, grid.world_pose, speed)

        try:
            command = planner.plan_step(pose, speed, grid, tick=tick)
        except NoRouteError:
            planning_failure = True
            break
        if command == NavCommand.GOAL_REACHED:
            success = True
            break

        lane_pts = planner.lane_targets()
        controls = follow_step(pose, speed, command, lane_pts, grid,
                               params=config.controller, bike=config.bicycle,
                               rect=config.rectify,
                               rectify=config.avoidance_enabled)

        accel = MAX_ACCEL * controls.throttle - MAX_DECEL * controls.brake - DRAG * speed
        new_speed = max(0.0, speed + accel * dt)
        steer_rad = -controls.steering * config.bicycle.max_steer
        candidate = bicycle_step(pose, new_speed, steer_rad,
                                 config.bicycle.wheelbase, dt)

        contact = any(footprint_overlaps(candidate, ob) for ob in sim_world.obstacles)
        if contact:
            # one infraction per contact site; creeping against the same
            # obstacle must not retrigger the counter
            if last_contact is None or math.hypot(pose.x - last_contact[0],
                                                  pose.y - last_contact[1]) > 2.0:
                collisions += 1
            last_contact = (pose.x, pose.y)
            new_speed = 0.0
        else:
            pose = candidate
        off = not sim_world.on_road(pose.x, pose.y, margin=0.3)
        if off and not was_off_road:
            off_road_events += 1
        was_off_road = off

        rows.append(TickRow(tick=tick, t=t, x=pose.x, y=pose.y, yaw=pose.yaw,
                            speed=new_speed, steering=controls.steering,
                            throttle=controls.throttle, brake=controls.brake,
                            command=command.value, collision=contact, off_road=off))
        dist_m += new_speed * dt
        speed = new_speed
        tick += 1

    time_used = tick * dt
    d0 = scenario.start.distance_to(scenario.dest)
    df = pose.distance_to(scenario.dest)
    if success or d0 <= 1e-9:
        pct = 100.0
    else:
        pct = max(0.0, min(100.0, 100.0 * (1.0 - df / d0)))

    metrics = Metrics(
        scenario_id=scenario.id,
        success=success,
        time_used=time_used,
        deadline=deadline,
        distance_to_goal_pct=pct,
        km_traveled=dist_m / 1000.0,
        static_collisions=collisions,
        off_road_events=off_road_events,
        replans=planner.replan_count,
        planning_failure=planning_failure,
        detection_ranges=[e.detection_range for e in planner.events],
        reroute_mandatory=scenario.reroute_mandatory,
        has_alternate=scenario.has_alternate,
    )
    return ScenarioResult(metrics=metrics, ticks=rows, grid=grid,
                          planner=planner, world=sim_world)
