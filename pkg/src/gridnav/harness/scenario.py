"""Benchmark scenario definition and YAML (de)serialization."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..geometry import Pose2D

FULL = "full"
PARTIAL = "partial"


@dataclass(frozen=True)
class ScenarioBlockage:
    """A road blockage box; kind tags whether it closes the whole road."""

    cx: float
    cy: float
    hx: float
    hy: float
    height: float = 1.5
    kind: str = FULL

    def __post_init__(self) -> None:
        if self.kind not in (FULL, PARTIAL):
            raise ValueError(f"unknown blockage kind {self.kind!r}")


@dataclass
class Scenario:
    id: str
    start: Pose2D
    dest: Pose2D
    blockages: list[ScenarioBlockage] = field(default_factory=list)
    seed: int = 0
    tick_dt: float = 0.05
    reroute_mandatory: bool = False
    has_alternate: bool = True


def _pose_doc(p: Pose2D) -> dict:
    return {"x": p.x, "y": p.y, "yaw": p.yaw}


def save_scenarios(scenarios: list[Scenario], path: str | Path) -> None:
    doc = {"scenarios": [{
        "id": s.id,
        "seed": s.seed,
        "tick_dt": s.tick_dt,
        "reroute_mandatory": s.reroute_mandatory,
        "has_alternate": s.has_alternate,
        "start": _pose_doc(s.start),
        "dest": _pose_doc(s.dest),
        "blockages": [{"cx": b.cx, "cy": b.cy, "hx": b.hx, "hy": b.hy,
                       "height": b.height, "kind": b.kind} for b in s.blockages],
    } for s in scenarios]}
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def load_scenarios(path: str | Path) -> list[Scenario]:
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    out = []
    for s in doc.get("scenarios", []):
        out.append(Scenario(
            id=str(s["id"]),
            start=Pose2D(float(s["start"]["x"]), float(s["start"]["y"]),
                         float(s["start"].get("yaw", 0.0))),
            dest=Pose2D(float(s["dest"]["x"]), float(s["dest"]["y"]),
                        float(s["dest"].get("yaw", 0.0))),
            blockages=[ScenarioBlockage(float(b["cx"]), float(b["cy"]),
                                        float(b["hx"]), float(b["hy"]),
                                        float(b.get("height", 1.5)),
                                        str(b.get("kind", FULL)))
                       for b in s.get("blockages", [])],
            seed=int(s.get("seed", 0)),
            tick_dt=float(s.get("tick_dt", 0.05)),
            reroute_mandatory=bool(s.get("reroute_mandatory", False)),
            has_alternate=bool(s.get("has_alternate", True)),
        ))
    return out
