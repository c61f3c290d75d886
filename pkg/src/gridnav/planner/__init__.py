from .graph import RoadGraph, build_world_graph
from .grid import Direction, PlanningMap, build_planning_map
from .astar import a_star
from .route import NavCommand, Route, assign_commands, route_progress
from .global_planner import GlobalPlanner, NoRouteError, PlannerParams

__all__ = [
    "RoadGraph", "build_world_graph",
    "Direction", "PlanningMap", "build_planning_map",
    "a_star",
    "NavCommand", "Route", "assign_commands", "route_progress",
    "GlobalPlanner", "NoRouteError", "PlannerParams",
]
