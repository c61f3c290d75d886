"""Directed weighted road graph built from town road endpoints."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..world import RoadSegment


def _key(x: float, y: float) -> tuple[float, float]:
    # endpoints are promised snap-consistent within 1e-6 m
    return (round(x, 6), round(y, 6))


@dataclass
class RoadGraph:
    nodes: list[tuple[float, float]] = field(default_factory=list)
    edges: list[tuple[int, int, float]] = field(default_factory=list)  # directed
    adjacency: dict[int, set[int]] = field(default_factory=dict)

    @property
    def intersections(self) -> list[int]:
        """Nodes where more than two roads meet."""
        return [i for i, nbrs in sorted(self.adjacency.items()) if len(nbrs) > 2]

    def intersection_positions(self) -> list[tuple[float, float]]:
        return [self.nodes[i] for i in self.intersections]

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [n[0] for n in self.nodes]
        ys = [n[1] for n in self.nodes]
        return min(xs), min(ys), max(xs), max(ys)


def build_world_graph(roads: list[RoadSegment]) -> RoadGraph:
    """One node per distinct road endpoint, one directed edge per travel direction."""
    if not roads:
        raise ValueError("cannot build a graph from an empty road list")
    graph = RoadGraph()
    index: dict[tuple[float, float], int] = {}

    def node_id(x: float, y: float) -> int:
        k = _key(x, y)
        if k not in index:
            index[k] = len(graph.nodes)
            graph.nodes.append((float(x), float(y)))
            graph.adjacency[index[k]] = set()
        return index[k]

    for road in roads:
        w = road.length
        if w <= 0.0:
            raise ValueError("zero-length road")
        a = node_id(road.x1, road.y1)
        b = node_id(road.x2, road.y2)
        graph.edges.append((a, b, w))
        graph.edges.append((b, a, w))
        graph.adjacency[a].add(b)
        graph.adjacency[b].add(a)
    return graph
