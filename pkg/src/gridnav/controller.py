"""Scripted pure-pursuit waypoint follower producing steering/throttle/brake.

Stands in for a learned driving policy: consumes the planner's navigational
command and lane-center target points, steers by pure pursuit and holds a
target cruise speed, slowing down through commanded turns. Steering passes
through the OGM rectifier; a blocked rectifier rollout triggers a full brake.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bicycle import BicycleParams
from .blockage import RectifyParams, rectify_steering
from .geometry import Pose2D, wrap_angle
from .ogm import OccupancyGrid
from .planner.route import NavCommand


@dataclass(frozen=True)
class Controls:
    steering: float   # scaled, -1 full left lock .. +1 full right lock
    throttle: float   # 0..1
    brake: float      # 0..1

    def __post_init__(self) -> None:
        if not (-1.0 <= self.steering <= 1.0):
            raise ValueError("steering out of [-1, 1]")
        if not (0.0 <= self.throttle <= 1.0 and 0.0 <= self.brake <= 1.0):
            raise ValueError("throttle/brake out of [0, 1]")
        if self.throttle > 0.0 and self.brake > 0.0:
            raise ValueError("throttle and brake must not both be positive")


FULL_BRAKE = Controls(steering=0.0, throttle=0.0, brake=1.0)


@dataclass(frozen=True)
class ControllerParams:
    target_speed: float = 7.0       # m/s, ~25 km/h cruise
    turn_speed: float = 4.0         # m/s through commanded turns
    accel_gain: float = 0.5
    brake_gain: float = 0.4
    min_lookahead: float = 4.0
    lookahead_speed_gain: float = 0.6


def _pick_target(pose: Pose2D, points: np.ndarray, lookahead: float):
    d = np.hypot(points[:, 0] - pose.x, points[:, 1] - pose.y)
    start = int(np.argmin(d))
    for i in range(start, points.shape[0]):
        if d[i] >= lookahead:
            return points[i], d[i]
    # route nearly exhausted: aim at the final point if it is still ahead
    last = points[-1]
    heading = (math.cos(pose.yaw), math.sin(pose.yaw))
    ahead = (last[0] - pose.x) * heading[0] + (last[1] - pose.y) * heading[1]
    if ahead > 0.5:
        return last, d[-1]
    return None, 0.0


def follow_step(pose: Pose2D, speed: float, command: NavCommand,
                lane_points: np.ndarray, grid: OccupancyGrid,
                params: ControllerParams = ControllerParams(),
                bike: BicycleParams = BicycleParams(),
                rect: RectifyParams = RectifyParams(),
                rectify: bool = True) -> Controls:
    """One control tick: pure pursuit + proportional speed + rectification."""
    if command == NavCommand.GOAL_REACHED or lane_points.shape[0] == 0:
        return FULL_BRAKE

    lookahead = max(params.min_lookahead, params.lookahead_speed_gain * speed)
    target, dist = _pick_target(pose, lane_points, lookahead)
    if target is None:
        return FULL_BRAKE

    alpha = wrap_angle(math.atan2(target[1] - pose.y, target[0] - pose.x) - pose.yaw)
    steer = math.atan2(2.0 * bike.wheelbase * math.sin(alpha), max(dist, 1e-6))
    steer = max(-bike.max_steer, min(bike.max_steer, steer))

    blocked = False
    if rectify:
        steer, blocked = rectify_steering(steer, pose, speed, grid, rect, bike)
    scaled = -steer / bike.max_steer    # positive bicycle steer = left turn = -1 side
    if blocked:
        return Controls(steering=scaled, throttle=0.0, brake=1.0)

    target_speed = params.turn_speed \
        if command in (NavCommand.GO_LEFT, NavCommand.GO_RIGHT) else params.target_speed
    err = target_speed - speed
    if err >= 0.0:
        throttle = min(1.0, params.accel_gain * err)
        brake = 0.0
    else:
        throttle = 0.0
        brake = min(1.0, params.brake_gain * -err) if err < -0.3 else 0.0
    return Controls(steering=scaled, throttle=throttle, brake=brake)
