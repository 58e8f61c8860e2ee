"""Any-angle geometric planning on occupancy grids.

The planner searches the 8-connected grid but relaxes each neighbor against
the expanded node's parent whenever the parent has line of sight to it, so
path segments are free to cut across cells.  Expansion order is made fully
deterministic by ordering the heap on (f, g, x, y): smaller g wins among
equal f, then lexicographic cell order.
"""

from __future__ import annotations

import heapq
import math

from .grid import Cell, GridMap, line_of_sight
from .steering import State

# (dx, dy, step cost); diagonal moves additionally require both side cells
# free so every grid edge passes the supercover line-of-sight test.
_NEIGHBORS = (
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, math.sqrt(2)),
    (1, -1, math.sqrt(2)),
    (-1, 1, math.sqrt(2)),
    (-1, -1, math.sqrt(2)),
)


def path_length(waypoints: list[State]) -> float:
    return sum(a.distance_to(b) for a, b in zip(waypoints, waypoints[1:]))


def _heading_states(
    grid: GridMap,
    cells: list[Cell],
    start_theta: float | None,
    goal_theta: float | None,
) -> list[State]:
    """Cell centers as poses, headings from the outgoing segment direction."""
    centers = [grid.cell_center(x, y) for x, y in cells]
    out: list[State] = []
    for i, (cx, cy) in enumerate(centers):
        if i + 1 < len(centers):
            nx, ny = centers[i + 1]
            theta = math.atan2(ny - cy, nx - cx)
        elif goal_theta is not None:
            theta = goal_theta
        elif len(centers) > 1:
            px, py = centers[i - 1]
            theta = math.atan2(cy - py, cx - px)
        else:
            theta = start_theta if start_theta is not None else 0.0
        out.append(State(cx, cy, theta))
    if start_theta is not None:
        out[0] = State(out[0].x, out[0].y, start_theta)
    if goal_theta is not None:
        out[-1] = State(out[-1].x, out[-1].y, goal_theta)
    return out


def theta_star(
    grid: GridMap,
    start: Cell,
    goal: Cell,
    start_theta: float | None = None,
    goal_theta: float | None = None,
) -> list[State] | None:
    """Plan an any-angle path between two free cells.

    Returns the waypoint list (cell centers in meters, headings along the
    outgoing segments unless overridden), or None when start and goal are
    disconnected.  Blocked or out-of-bounds endpoints raise ValueError.
    """
    if not grid.is_free(*start):
        raise ValueError(f"start cell {start} is blocked or out of bounds")
    if not grid.is_free(*goal):
        raise ValueError(f"goal cell {goal} is blocked or out of bounds")
    if start == goal:
        return _heading_states(grid, [start], start_theta, goal_theta)

    occ = grid.occupancy
    width, height = grid.width, grid.height
    gx, gy = goal

    g_best: dict[Cell, float] = {start: 0.0}
    parent: dict[Cell, Cell | None] = {start: None}
    open_heap: list[tuple[float, float, int, int]] = []
    heapq.heappush(open_heap, (math.hypot(gx - start[0], gy - start[1]), 0.0, *start))

    while open_heap:
        _, g, x, y = heapq.heappop(open_heap)
        cell = (x, y)
        if g > g_best.get(cell, math.inf):
            continue  # stale heap entry
        if cell == goal:
            cells = [cell]
            while parent[cells[-1]] is not None:
                cells.append(parent[cells[-1]])
            cells.reverse()
            return _heading_states(grid, cells, start_theta, goal_theta)
        par = parent[cell]
        for dx, dy, cost in _NEIGHBORS:
            nx, ny = x + dx, y + dy
            if not (0 <= nx < width and 0 <= ny < height) or occ[nx, ny]:
                continue
            if dx and dy and (occ[x, ny] or occ[nx, y]):
                continue  # no cutting past a blocked corner
            neighbor = (nx, ny)
            best = g_best.get(neighbor, math.inf)
            relaxed = None
            if par is not None:
                g2 = g_best[par] + math.hypot(nx - par[0], ny - par[1])
                # The parent shortcut never loses to the grid edge, so check
                # line of sight only when the shortcut would improve.
                if g2 < best and line_of_sight(grid, par, neighbor):
                    relaxed = (g2, par)
            if relaxed is None:
                g1 = g + cost
                if g1 < best:
                    relaxed = (g1, cell)
            if relaxed is not None:
                g_new, via = relaxed
                g_best[neighbor] = g_new
                parent[neighbor] = via
                f = g_new + math.hypot(gx - nx, gy - ny)
                heapq.heappush(open_heap, (f, g_new, nx, ny))
    return None
