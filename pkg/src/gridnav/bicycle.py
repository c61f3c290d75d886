"""Kinematic bicycle model for short-horizon trajectory rollout."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Pose2D, wrap_angle


@dataclass(frozen=True)
class BicycleParams:
    """Kinematic bicycle: wheelbase in meters, steering limit in radians.

    horizon / n_states shape the prediction rollout: n_states poses at
    equally spaced times over [0, horizon], the first being the current pose.
    """

    wheelbase: float = 2.7
    max_steer: float = 0.5
    horizon: float = 3.0
    n_states: int = 5

    def __post_init__(self) -> None:
        if self.wheelbase <= 0.0:
            raise ValueError("wheelbase must be > 0")
        if self.n_states < 2:
            raise ValueError("n_states must be >= 2")


def bicycle_step(pose: Pose2D, speed: float, steering: float,
                 wheelbase: float, dt: float) -> Pose2D:
    """One forward-Euler step of the kinematic bicycle."""
    return Pose2D(
        pose.x + speed * math.cos(pose.yaw) * dt,
        pose.y + speed * math.sin(pose.yaw) * dt,
        wrap_angle(pose.yaw + speed * math.tan(steering) / wheelbase * dt),
    )


def bicycle_predict(pose: Pose2D, speed: float, steering: float,
                    params: BicycleParams) -> list[Pose2D]:
    """Constant speed/steering rollout: n_states poses over the horizon.

    Poses are spaced horizon/(n_states-1) seconds apart starting at the
    current pose, integrated with forward Euler at that same step.
    """
    dt = params.horizon / (params.n_states - 1)
    states = [pose]
    for _ in range(params.n_states - 1):
        states.append(bicycle_step(states[-1], speed, steering, params.wheelbase, dt))
    return states
