"""pathsteer: kinematically feasible trajectories for car-like robots.

Plans an any-angle geometric path on an occupancy grid, then smooths it
into a trajectory the bicycle model can actually follow, using either a
DAG-based pruning baseline or a faster greedy variant that heuristically
samples bridge states around bottlenecks.
"""

__version__ = "0.1.0"

from .bench import (
    BenchReport,
    Scenario,
    TaskResult,
    generate_scenarios,
    read_scenarios,
    run_benchmark,
    write_report,
    write_scenarios,
)
from .config import PlannerSettings, load_settings, parse_settings
from .estimators import GripsSmoother, TrajectoryPlanner
from .grid import (
    DistanceMap,
    GridMap,
    MapFormatError,
    Vec2,
    distance_transform,
    dumps_movingai,
    gradient_at,
    inflate,
    line_of_sight,
    load_movingai,
    state_clearance,
)
from .maps import bundled_maps, indoor_map, outdoor_map
from .phase1 import Phase1Config, insert_states, move_and_insert, move_states, update_headings
from .planner import PlanResult, geometric_stage, plan_trajectory, smoothing_stage, validate_trajectory
from .prune_grips import PruneOriginalConfig, PruneResult, mark_irremovable, prune_original
from .prune_hs import (
    HSResult,
    PruneHSConfig,
    PruneOutcome,
    extra_states,
    prune_modified,
    reach_next_states,
    skip_states,
)
from .render import render_svg
from .steering import (
    Control,
    PolarError,
    RobotParams,
    State,
    SteerConfig,
    SteerResult,
    Steering,
    SteeringGains,
    Trajectory,
    compute_control,
    integrate_step,
    normalize_angle,
    polar_error,
    steer,
    trajectory_collides,
)
from .theta_star import path_length, theta_star

__all__ = [
    "BenchReport",
    "Control",
    "DistanceMap",
    "GridMap",
    "GripsSmoother",
    "HSResult",
    "MapFormatError",
    "Phase1Config",
    "PlanResult",
    "PlannerSettings",
    "PolarError",
    "PruneHSConfig",
    "PruneOriginalConfig",
    "PruneOutcome",
    "PruneResult",
    "RobotParams",
    "Scenario",
    "State",
    "SteerConfig",
    "SteerResult",
    "Steering",
    "SteeringGains",
    "TaskResult",
    "Trajectory",
    "TrajectoryPlanner",
    "Vec2",
    "bundled_maps",
    "compute_control",
    "distance_transform",
    "dumps_movingai",
    "extra_states",
    "generate_scenarios",
    "geometric_stage",
    "gradient_at",
    "indoor_map",
    "inflate",
    "insert_states",
    "integrate_step",
    "line_of_sight",
    "load_movingai",
    "load_settings",
    "mark_irremovable",
    "move_and_insert",
    "move_states",
    "normalize_angle",
    "outdoor_map",
    "parse_settings",
    "path_length",
    "plan_trajectory",
    "polar_error",
    "prune_modified",
    "prune_original",
    "reach_next_states",
    "read_scenarios",
    "render_svg",
    "run_benchmark",
    "skip_states",
    "smoothing_stage",
    "state_clearance",
    "steer",
    "theta_star",
    "trajectory_collides",
    "update_headings",
    "validate_trajectory",
    "write_report",
    "write_scenarios",
]
