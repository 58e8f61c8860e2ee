"""First smoothing phase: nudge waypoints off obstacles and seed tight spots.

Interior waypoints ride the clearance gradient for a fixed number of
decaying-step rounds; early in that loop, extra waypoints are inserted
wherever a steered connection dips to a local clearance minimum far enough
from both endpoints, and the remaining rounds pull those new states off the
obstacles too.  Headings are re-averaged after every round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grid import DistanceMap, GridMap, gradient_at, points_clearance, position_free, segment_free, state_clearance
from .steering import State, SteerFn, circular_mean


@dataclass(frozen=True)
class Phase1Config:
    eta0: float = 1.0  # gradient step, in cells
    discount: float = 0.8
    move_rounds: int = 5  # K
    d_min: float = 1.0  # meters
    insert_rounds: int = 1  # r

    def __post_init__(self):
        if not self.eta0 > 0:
            raise ValueError("eta0 must be positive")
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must lie in (0, 1)")
        if self.move_rounds < 1:
            raise ValueError("move_rounds must be at least 1")
        if not self.d_min > 0:
            raise ValueError("d_min must be positive")
        if self.insert_rounds < 1:
            raise ValueError("insert_rounds must be at least 1")


def move_states(
    path: list[State],
    dmap: DistanceMap,
    grid: GridMap,
    cfg: Phase1Config,
    round_index: int,
) -> list[State]:
    """One gradient-ascent round; the step decays as eta0 * discount^k.

    Start and goal never move.  A candidate move is rejected when it lands
    in a blocked cell, when it fails to strictly gain clearance, or when it
    loses line of sight to both neighbors.
    """
    if len(path) < 3:
        return list(path)
    step_m = cfg.eta0 * cfg.discount**round_index * dmap.cell_size
    out = list(path)
    for i in range(1, len(out) - 1):
        w = out[i]
        grad = gradient_at(dmap, w.x, w.y)
        if grad.dx == 0.0 and grad.dy == 0.0:
            continue
        cand = State(w.x + step_m * grad.dx, w.y + step_m * grad.dy, w.theta)
        if not position_free(grid, cand.x, cand.y):
            continue
        if state_clearance(dmap, cand.x, cand.y) <= state_clearance(dmap, w.x, w.y):
            continue
        prev = out[i - 1]
        nxt = out[i + 1]
        if not segment_free(grid, (prev.x, prev.y), (cand.x, cand.y)) and not segment_free(
            grid, (cand.x, cand.y), (nxt.x, nxt.y)
        ):
            continue
        out[i] = cand
    return out


def insert_states(
    path: list[State],
    dmap: DistanceMap,
    steer_fn: SteerFn,
    cfg: Phase1Config,
) -> list[State]:
    """Insert steered-trajectory states at strict clearance minima.

    Each consecutive waypoint pair is connected with the steering function
    (partial motions are scanned too) and every state whose clearance is
    strictly below both neighbors' and which lies more than d_min from both
    enclosing waypoints joins the path.  An insertion splits its pair, so
    later minima measure against the freshly inserted state; successive
    insertions therefore stay at least d_min apart.
    """
    if len(path) < 2:
        return list(path)
    out = [path[0]]
    for a, b in zip(path, path[1:]):
        tr = steer_fn(a, b).trajectory
        if len(tr) >= 3:
            clear = points_clearance(dmap, tr.states[:, :2])
            left = a
            for k in range(1, len(tr) - 1):
                if not (clear[k] < clear[k - 1] and clear[k] < clear[k + 1]):
                    continue
                s = tr.state(k)
                if s.distance_to(left) > cfg.d_min and s.distance_to(b) > cfg.d_min:
                    out.append(s)
                    left = s
        out.append(b)
    return out


def update_headings(path: list[State]) -> list[State]:
    """Point each interior waypoint along the mean of its segment directions.

    Endpoint headings are left untouched; they carry the task's start and
    goal orientations.
    """
    if len(path) < 3:
        return list(path)
    out = list(path)
    for i in range(1, len(out) - 1):
        w = out[i]
        prev = out[i - 1]
        nxt = out[i + 1]
        incoming = math.atan2(w.y - prev.y, w.x - prev.x)
        outgoing = math.atan2(nxt.y - w.y, nxt.x - w.x)
        out[i] = State(w.x, w.y, circular_mean(incoming, outgoing))
    return out


def move_and_insert(
    path: list[State],
    dmap: DistanceMap,
    grid: GridMap,
    steer_fn: SteerFn,
    cfg: Phase1Config,
) -> list[State]:
    """Full first phase: K move rounds with the insert rounds interleaved
    after the earliest moves, re-averaging headings after every round.

    Insertion places states at clearance minima, i.e. the most exposed
    points of the connection, so it must happen while move rounds remain:
    the later rounds then carry the new states off the obstacles.  Running
    all insertions last would leave waypoints at near-contact clearance
    that no collision-free motion can end at.  Never drops a waypoint.
    """
    out = list(path)
    inserts_done = 0
    for k in range(cfg.move_rounds):
        out = move_states(out, dmap, grid, cfg, k)
        out = update_headings(out)
        if inserts_done < cfg.insert_rounds:
            out = insert_states(out, dmap, steer_fn, cfg)
            out = update_headings(out)
            inserts_done += 1
    while inserts_done < cfg.insert_rounds:
        out = insert_states(out, dmap, steer_fn, cfg)
        out = update_headings(out)
        inserts_done += 1
    return out
