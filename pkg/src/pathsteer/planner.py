"""End-to-end pipeline: geometric plan, phase 1, prune, validate.

The geometric stage runs on a grid inflated by the robot radius so that
clearance handling lives in one place; the smoothing stages check actual
clearance against the raw distance map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PlannerSettings
from .grid import DistanceMap, GridMap, distance_transform, inflate, state_clearance
from .phase1 import move_and_insert
from .prune_grips import prune_original
from .prune_hs import prune_modified
from .steering import (
    Control,
    State,
    Steering,
    Trajectory,
    integrate_step,
    normalize_angle,
    trajectory_collides,
)
from .theta_star import theta_star

ALGORITHMS = ("grips", "grips-hs")


@dataclass(frozen=True)
class PlanResult:
    trajectory: Trajectory
    geometric_path: list[State]
    smoothed_path: list[State]  # after phase 1
    waypoints: list[State]  # retained by pruning (segment boundaries)
    extra_states: list[State]  # sampled bridge states (grips-hs only)


def geometric_stage(
    grid: GridMap,
    dmap: DistanceMap,
    start: State,
    goal: State,
    settings: PlannerSettings,
) -> list[State] | None:
    """Any-angle path between the task poses, on the inflated grid.

    The first and last waypoints are replaced by the exact task poses.
    Raises ValueError when either endpoint has less clearance than the
    robot radius; returns None when they are disconnected.
    """
    radius = settings.robot.radius
    if state_clearance(dmap, start.x, start.y) < radius:
        raise ValueError("start pose is blocked or too close to an obstacle")
    if state_clearance(dmap, goal.x, goal.y) < radius:
        raise ValueError("goal pose is blocked or too close to an obstacle")
    pgrid = inflate(grid, dmap, radius)
    path = theta_star(
        pgrid,
        grid.cell_of(start.x, start.y),
        grid.cell_of(goal.x, goal.y),
        start_theta=start.theta,
        goal_theta=goal.theta,
    )
    if path is None:
        return None
    if len(path) == 1 and start != goal:
        return [start, goal]  # same cell, distinct poses
    path[0] = start
    path[-1] = goal
    return path


def smoothing_stage(
    grid: GridMap,
    dmap: DistanceMap,
    path: list[State],
    settings: PlannerSettings,
    algorithm: str = "grips-hs",
) -> PlanResult | None:
    """Phase 1 plus the selected pruning phase.  This is the timed part of
    a benchmark task."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm '{algorithm}'")
    radius = settings.robot.radius
    steer_fn = Steering(settings.steer, settings.gains, settings.robot)
    pgrid = inflate(grid, dmap, radius)
    smoothed = move_and_insert(path, dmap, pgrid, steer_fn, settings.phase1)
    if algorithm == "grips":
        pruned = prune_original(smoothed, steer_fn, dmap, radius, settings.prune)
        if pruned is None:
            return None
        return PlanResult(pruned.trajectory, list(path), smoothed, pruned.waypoints, [])
    result = prune_modified(smoothed, settings.prune_hs, steer_fn, pgrid, dmap, radius)
    if result is None:
        return None
    return PlanResult(result.trajectory, list(path), smoothed, result.waypoints, result.extra_states)


def plan_trajectory(
    grid: GridMap,
    start: State,
    goal: State,
    settings: PlannerSettings | None = None,
    dmap: DistanceMap | None = None,
    algorithm: str = "grips-hs",
) -> PlanResult | None:
    """Plan a kinematically feasible trajectory between two poses.

    Returns None when either stage fails; raises ValueError for endpoints
    the robot cannot legally occupy.
    """
    settings = settings if settings is not None else PlannerSettings()
    dmap = dmap if dmap is not None else distance_transform(grid)
    path = geometric_stage(grid, dmap, start, goal, settings)
    if path is None:
        return None
    if len(path) == 1:
        steer_fn = Steering(settings.steer, settings.gains, settings.robot)
        only = steer_fn(path[0], path[0]).trajectory
        return PlanResult(only, path, list(path), list(path), [])
    return smoothing_stage(grid, dmap, path, settings, algorithm)


def validate_trajectory(
    dmap: DistanceMap,
    trajectory: Trajectory,
    goal: State,
    settings: PlannerSettings,
) -> list[str]:
    """All invariant violations of a finished trajectory (empty = valid).

    Checks control limits, per-step acceleration, exact re-integration of
    the stored controls, clearance along the whole motion, and terminal
    pose tolerance.
    """
    problems: list[str] = []
    robot, steer_cfg = settings.robot, settings.steer
    eps = 1e-9
    controls = trajectory.controls
    if len(controls):
        v = controls[:, 0]
        gamma = controls[:, 1]
        if (v < -eps).any() or (v > robot.v_max + eps).any():
            problems.append("velocity limit violated")
        if (np.abs(gamma) > robot.gamma_max + eps).any():
            problems.append("steering angle limit violated")
        dv = np.diff(v, prepend=trajectory.v0)
        if (np.abs(dv) > robot.a_max * trajectory.dt + eps).any():
            problems.append("acceleration limit violated")

    replay = trajectory.state(0)
    for i in range(len(controls)):
        replay = integrate_step(replay, Control(*controls[i]), trajectory.dt, robot)
        sx, sy, stheta = trajectory.states[i + 1]
        if (
            abs(replay.x - sx) > 1e-9
            or abs(replay.y - sy) > 1e-9
            or abs(normalize_angle(replay.theta - stheta)) > 1e-9
        ):
            problems.append(f"re-integration diverges at state {i + 1}")
            break

    if trajectory_collides(dmap, trajectory, robot.radius):
        problems.append("trajectory collides")

    end = trajectory.end
    if end.distance_to(goal) > steer_cfg.pos_tol + eps:
        problems.append("endpoint misses goal position tolerance")
    if abs(normalize_angle(end.theta - goal.theta)) > steer_cfg.ang_tol + eps:
        problems.append("endpoint misses goal heading tolerance")
    return problems
