"""Greedy second phase with heuristic sampling of bridge states.

Instead of pruning over a DAG, the path is consumed front to back from an
anchor pose (the actual endpoint of the last appended motion):

* skip: while the next waypoints are directly reachable, jump to the
  farthest one;
* reach: when the immediate successor is unreachable, try the following
  waypoints up to a user horizon;
* bridge: as a last resort, sample candidate poses on a line through the
  midpoint of the blocked segment and adopt the first one that connects
  both ways.

Failure to bridge is the only failure mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import DistanceMap, GridMap, position_free
from .steering import (
    State,
    SteerFn,
    SteerResult,
    Trajectory,
    circular_mean,
    concat_trajectories,
    trajectory_collides,
)


@dataclass(frozen=True)
class PruneHSConfig:
    horizon: int = 5  # H, waypoints to look ahead when the successor is unreachable
    max_offset: float = 5.0  # M, meters, half-extent of the sampling line
    sample_step: float = 1.0  # meters between candidate states
    extra_mode: str = "perpendicular"  # or "heading-average"
    candidate_order: str = "nearest"  # or "sweep" (-M .. M)

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if not self.max_offset > 0:
            raise ValueError("max_offset must be positive")
        if not 0 < self.sample_step <= 2 * self.max_offset:
            raise ValueError("sample_step must lie in (0, 2 * max_offset]")
        if self.extra_mode not in ("perpendicular", "heading-average"):
            raise ValueError("extra_mode must be 'perpendicular' or 'heading-average'")
        if self.candidate_order not in ("nearest", "sweep"):
            raise ValueError("candidate_order must be 'nearest' or 'sweep'")


@dataclass(frozen=True)
class PruneOutcome:
    new_index: int
    anchor: State  # actual endpoint of the last steered motion
    segment: Trajectory


@dataclass(frozen=True)
class HSResult:
    trajectory: Trajectory
    waypoints: list[State]  # visited nominal waypoints, sampled bridges included
    extra_states: list[State]  # just the sampled bridge states


def _feasible(result: SteerResult, dmap: DistanceMap, radius: float) -> bool:
    return result.reached and not trajectory_collides(dmap, result.trajectory, radius)


def skip_states(
    path: list[State],
    anchor: State,
    i: int,
    steer_fn: SteerFn,
    dmap: DistanceMap,
    radius: float,
    v0: float = 0.0,
    first: SteerResult | None = None,
) -> PruneOutcome:
    """Greedily extend a known-good motion anchor -> path[i+1] to the
    farthest waypoint still reachable in one motion.

    Advances j while each attempt succeeds and keeps the trajectory of the
    last success; the precondition (path[i+1] reachable) guarantees j > i.
    """
    j = i + 1
    best = first if first is not None else steer_fn(anchor, path[j], v0=v0)
    while j + 1 < len(path):
        attempt = steer_fn(anchor, path[j + 1], v0=v0)
        if not _feasible(attempt, dmap, radius):
            break
        j += 1
        best = attempt
    return PruneOutcome(j, best.trajectory.end, best.trajectory)


def reach_next_states(
    path: list[State],
    anchor: State,
    i: int,
    cfg: PruneHSConfig,
    steer_fn: SteerFn,
    dmap: DistanceMap,
    radius: float,
    v0: float = 0.0,
) -> PruneOutcome | None:
    """Try the waypoints after the unreachable successor, up to the horizon.

    Targets are path[i+2] .. path[i+H], clamped at the goal index; the first
    feasible motion wins.  None when every attempt fails.
    """
    last = len(path) - 1
    for j in range(i + 2, min(i + cfg.horizon, last) + 1):
        attempt = steer_fn(anchor, path[j], v0=v0)
        if _feasible(attempt, dmap, radius):
            return PruneOutcome(j, attempt.trajectory.end, attempt.trajectory)
    return None


def candidate_offsets(cfg: PruneHSConfig) -> list[float]:
    """Signed offsets along the sampling line, in selection order.

    'nearest' prefers minimal deviation from the path: 0, +s, -s, +2s, ...
    'sweep' runs -M, -M+s, ..., +M.
    """
    eps = 1e-9
    if cfg.candidate_order == "nearest":
        offsets = [0.0]
        k = 1
        while k * cfg.sample_step <= cfg.max_offset + eps:
            offsets.append(k * cfg.sample_step)
            offsets.append(-k * cfg.sample_step)
            k += 1
        return offsets
    n = int(math.floor(2 * cfg.max_offset / cfg.sample_step + eps))
    return [-cfg.max_offset + k * cfg.sample_step for k in range(n + 1)]


def extra_states(
    a: State,
    b: State,
    cfg: PruneHSConfig,
    steer_fn: SteerFn,
    grid: GridMap,
    dmap: DistanceMap,
    radius: float,
    v0: float = 0.0,
) -> tuple[State, Trajectory, Trajectory] | None:
    """Sample a bridge state between two poses that cannot be connected.

    Candidates sit on a line through the midpoint of segment ab, directed
    along its normal ('perpendicular') or along the average of the two
    headings ('heading-average'), with the segment slope as their heading.
    The first candidate on a free cell whose two half-motions both reach
    without collision wins; the second half starts from the actual endpoint
    of the first so the bridge can be adopted as-is.  None when no candidate
    works.
    """
    mx = 0.5 * (a.x + b.x)
    my = 0.5 * (a.y + b.y)
    slope = math.atan2(b.y - a.y, b.x - a.x)
    if cfg.extra_mode == "perpendicular":
        ux, uy = -math.sin(slope), math.cos(slope)
    else:
        mean = circular_mean(a.theta, b.theta)
        ux, uy = math.cos(mean), math.sin(mean)
    for d in candidate_offsets(cfg):
        px = mx + d * ux
        py = my + d * uy
        if not position_free(grid, px, py):
            continue
        candidate = State(px, py, slope)
        first = steer_fn(a, candidate, v0=v0)
        if not _feasible(first, dmap, radius):
            continue
        second = steer_fn(first.trajectory.end, b, v0=first.trajectory.end_v)
        if not _feasible(second, dmap, radius):
            continue
        return candidate, first.trajectory, second.trajectory
    return None


def prune_modified(
    path: list[State],
    cfg: PruneHSConfig,
    steer_fn: SteerFn,
    grid: GridMap,
    dmap: DistanceMap,
    radius: float,
    start_v: float = 0.0,
) -> HSResult | None:
    """Run the greedy skip / reach / bridge loop over a whole path.

    The anchor starts at path[0] and is always the actual endpoint of the
    last appended motion, with its velocity carried into the next one.
    Returns None exactly when a bridge attempt fails.
    """
    if len(path) == 1:
        only = steer_fn(path[0], path[0], v0=start_v).trajectory
        return HSResult(only, [path[0]], [])

    anchor = path[0]
    v = start_v
    segments: list[Trajectory] = []
    visited = [path[0]]
    extras: list[State] = []
    i = 0
    n = len(path)
    while i < n - 1:
        direct = steer_fn(anchor, path[i + 1], v0=v)
        if _feasible(direct, dmap, radius):
            outcome = skip_states(path, anchor, i, steer_fn, dmap, radius, v0=v, first=direct)
        else:
            outcome = None
            if cfg.horizon > 1:
                outcome = reach_next_states(path, anchor, i, cfg, steer_fn, dmap, radius, v0=v)
            if outcome is None:
                bridge = extra_states(anchor, path[i + 1], cfg, steer_fn, grid, dmap, radius, v0=v)
                if bridge is None:
                    return None
                candidate, first, second = bridge
                segments.extend([first, second])
                visited.extend([candidate, path[i + 1]])
                extras.append(candidate)
                anchor = second.end
                v = second.end_v
                i += 1
                continue
        segments.append(outcome.segment)
        visited.append(path[outcome.new_index])
        anchor = outcome.anchor
        v = outcome.segment.end_v
        i = outcome.new_index
    return HSResult(concat_trajectories(segments), visited, extras)
