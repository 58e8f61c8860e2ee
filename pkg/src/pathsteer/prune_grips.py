"""Baseline second phase: shortcut-based pruning over a waypoint DAG.

Interior waypoints whose neighbors cannot be connected directly are marked
irremovable; between each pair of consecutive irremovable anchors a DAG of
feasible steered transitions is built and its minimum-length path selects
the waypoints to keep.  The whole pass repeats until the waypoint set is
stable (or a round limit is hit), then the kept waypoints are steered in
sequence, each motion continuing from the actual endpoint and the carried
velocity of the previous one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import DistanceMap
from .steering import (
    State,
    SteerFn,
    Trajectory,
    concat_trajectories,
    trajectory_collides,
)


@dataclass(frozen=True)
class PruneOriginalConfig:
    max_rounds: int = 50  # L_max

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")


@dataclass(frozen=True)
class PruneResult:
    trajectory: Trajectory
    waypoints: list[State]


class _EdgeCache:
    """Memoizes nominal steering attempts as (feasible, completed length).

    Waypoint poses recur across pruning rounds, so caching by (from, to)
    pose pair avoids re-simulating identical motions.  Only exploratory
    evaluations (which always start from rest) go through the cache.

    The completed length is the realized trajectory length plus the
    residual gap to the nominal target.  Steering stops anywhere inside the
    arrival tolerance, so raw lengths systematically under-count by up to
    pos_tol per hop and would bias the DAG toward keeping every waypoint;
    charging the residual makes hop costs add up like true distances.
    """

    def __init__(self, steer_fn: SteerFn, dmap: DistanceMap, radius: float):
        self.steer_fn = steer_fn
        self.dmap = dmap
        self.radius = radius
        self._table: dict[tuple[State, State], tuple[bool, float]] = {}

    def query(self, a: State, b: State) -> tuple[bool, float]:
        key = (a, b)
        hit = self._table.get(key)
        if hit is None:
            result = self.steer_fn(a, b)
            feasible = result.reached and not trajectory_collides(
                self.dmap, result.trajectory, self.radius
            )
            completed = result.trajectory.length + result.trajectory.end.distance_to(b)
            hit = (feasible, completed)
            self._table[key] = hit
        return hit


def mark_irremovable(
    path: list[State],
    steer_fn: SteerFn,
    dmap: DistanceMap,
    radius: float,
) -> set[int]:
    """Indices whose removal breaks the path, plus both endpoints.

    Interior index i is irremovable when steering from its predecessor to
    its successor fails to reach or collides.
    """
    cache = _EdgeCache(steer_fn, dmap, radius)
    return _mark_irremovable(path, cache)


def _mark_irremovable(path: list[State], cache: _EdgeCache) -> set[int]:
    irremovable = {0, len(path) - 1}
    for i in range(1, len(path) - 1):
        feasible, _ = cache.query(path[i - 1], path[i + 1])
        if not feasible:
            irremovable.add(i)
    return irremovable


def _dag_select(path: list[State], anchors: list[int], cache: _EdgeCache) -> list[int] | None:
    """Minimum-length waypoint subsequence through every anchor.

    Between consecutive anchors a and b, nodes are indices a..b and a
    forward edge i -> j exists when the nominal steer is feasible, weighted
    by completed trajectory length.  Near-equal costs (within 1e-6, e.g.
    collinear waypoints) resolve toward fewer segments.  Returns None when
    some anchor pair is disconnected.
    """
    keep: list[int] = [anchors[0]]
    for a, b in zip(anchors, anchors[1:]):
        dist: dict[int, float] = {a: 0.0}
        hops: dict[int, int] = {a: 0}
        pred: dict[int, int] = {}
        for j in range(a + 1, b + 1):
            for i in range(a, j):
                if i not in dist:
                    continue
                feasible, length = cache.query(path[i], path[j])
                if not feasible:
                    continue
                cand = dist[i] + length
                best = dist.get(j, math.inf)
                better = cand < best - 1e-6
                tied = abs(cand - best) <= 1e-6 and hops[i] + 1 < hops[j]
                if better or tied:
                    dist[j] = cand
                    hops[j] = hops[i] + 1
                    pred[j] = i
        if b not in dist:
            return None
        chain = [b]
        while chain[-1] != a:
            chain.append(pred[chain[-1]])
        keep.extend(reversed(chain[:-1]))
    return keep


def prune_original(
    path: list[State],
    steer_fn: SteerFn,
    dmap: DistanceMap,
    radius: float,
    cfg: PruneOriginalConfig,
    start_v: float = 0.0,
) -> PruneResult | None:
    """Prune a path and realize it as one chained trajectory.

    Rounds of mark/DAG/select run until the waypoint set stops changing or
    max_rounds is exhausted.  The final concatenation re-steers from actual
    motion endpoints and re-validates, so the returned trajectory is
    collision-free end to end; None signals failure.
    """
    cache = _EdgeCache(steer_fn, dmap, radius)
    waypoints = list(path)
    for _ in range(cfg.max_rounds):
        if len(waypoints) < 3:
            break
        anchors = sorted(_mark_irremovable(waypoints, cache))
        keep = _dag_select(waypoints, anchors, cache)
        if keep is None:
            return None
        if keep == list(range(len(waypoints))):
            break
        waypoints = [waypoints[i] for i in keep]

    if len(waypoints) == 1:
        only = steer_fn(waypoints[0], waypoints[0], v0=start_v).trajectory
        return PruneResult(only, waypoints)

    segments = []
    anchor = waypoints[0]
    v = start_v
    for target in waypoints[1:]:
        result = steer_fn(anchor, target, v0=v)
        if not result.reached or trajectory_collides(dmap, result.trajectory, radius):
            return None
        segments.append(result.trajectory)
        anchor = result.trajectory.end
        v = result.trajectory.end_v
    return PruneResult(concat_trajectories(segments), waypoints)
