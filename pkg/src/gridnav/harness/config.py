"""Simulation configuration: one YAML tree covering every module's parameters.

Keys ending in ``_deg`` are converted to radians and mapped onto the
corresponding dataclass field. The built-in defaults carry the published
parameter set (log-odds 0.9/0.7, 0.5 m resolution, 1 m wall depth, 2 deg
beam width, planning resolution 8.215 m, command windows 4/1 cells,
5 route cells) with a desk-scale 8-layer driving LiDAR.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..bicycle import BicycleParams
from ..blockage import BlockageParams, RectifyParams
from ..controller import ControllerParams
from ..lidar import LidarConfig
from ..ogm import OgmParams
from ..planner.global_planner import PlannerParams


def _driving_lidar() -> LidarConfig:
    return LidarConfig(n_layers=8)


@dataclass
class SimConfig:
    ogm: OgmParams = field(default_factory=OgmParams)
    lidar: LidarConfig = field(default_factory=_driving_lidar)
    planner: PlannerParams = field(default_factory=PlannerParams)
    blockage: BlockageParams = field(default_factory=BlockageParams)
    rectify: RectifyParams = field(default_factory=RectifyParams)
    controller: ControllerParams = field(default_factory=ControllerParams)
    bicycle: BicycleParams = field(default_factory=BicycleParams)
    filter_height: float = 2.5     # overhang removal threshold, meters (world z)
    downsample: int = 2            # keep every k-th filtered scan point
    sensor_period: int = 2         # control ticks between OGM updates
    tick_dt: float = 0.05
    avoidance_enabled: bool = True


_SECTIONS = {
    "ogm": OgmParams,
    "lidar": LidarConfig,
    "planner": PlannerParams,
    "blockage": BlockageParams,
    "rectify": RectifyParams,
    "controller": ControllerParams,
    "bicycle": BicycleParams,
}


def _build_section(cls, defaults, overrides: dict):
    kwargs = dataclasses.asdict(defaults)
    for key, value in overrides.items():
        if key.endswith("_deg"):
            kwargs[key[:-4]] = math.radians(float(value))
        else:
            kwargs[key] = value
    return cls(**kwargs)


def load_config(path: str | Path | None = None,
                overrides: dict | None = None) -> SimConfig:
    """Build a SimConfig from defaults, an optional YAML file and overrides."""
    doc: dict = {}
    if path is not None:
        with open(path) as fh:
            doc = yaml.safe_load(fh) or {}
    if overrides:
        for k, v in overrides.items():
            if isinstance(v, dict):
                doc.setdefault(k, {}).update(v)
            else:
                doc[k] = v
    cfg = SimConfig()
    for name, cls in _SECTIONS.items():
        if name in doc and doc[name] is not None:
            setattr(cfg, name, _build_section(cls, getattr(cfg, name), doc[name]))
    for scalar in ("filter_height", "downsample", "sensor_period", "tick_dt",
                   "avoidance_enabled"):
        if scalar in doc:
            setattr(cfg, scalar, doc[scalar])
    return cfg


def default_config_yaml() -> str:
    """The full default configuration tree, serialized for editing."""
    cfg = SimConfig()
    doc = {name: dataclasses.asdict(getattr(cfg, name)) for name in _SECTIONS}
    for scalar in ("filter_height", "downsample", "sensor_period", "tick_dt",
                   "avoidance_enabled"):
        doc[scalar] = getattr(cfg, scalar)
    return yaml.safe_dump(doc, sort_keys=False)
