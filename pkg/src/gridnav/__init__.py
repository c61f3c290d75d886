"""Occupancy-grid mapping, route planning, and road-blockage avoidance toolkit."""

from .geometry import GridIndex, PolarPoint, Pose2D, bezier_sample, cart_to_polar, \
    convex_hull, rasterize_region
from .bicycle import BicycleParams, bicycle_predict
from .world import ObstacleBox, RoadSegment, World, load_world, save_world
from .lidar import LidarConfig, ScanPoint, downsample_scan, filter_scan, raycast_scan
from .pgv import PGVImage, encode_pgv, pgv_to_pgm
from .ogm import OccupancyGrid, OgmParams, PositionCircle, export_map_pgm, \
    export_map_raw, occupancy_probability, position_circle, slice_occupied_count, update
from .blockage import BlockageParams, RectifyParams, detect_blockages, \
    lane_center_waypoints, rectify_steering
from .controller import ControllerParams, Controls, follow_step
from .planner import GlobalPlanner, NavCommand, NoRouteError, PlannerParams, Route, \
    a_star, assign_commands, build_planning_map, build_world_graph, route_progress

__version__ = "0.1.0"
