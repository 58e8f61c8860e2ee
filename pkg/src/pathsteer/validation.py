"""Input validation helpers for the estimator facade."""

from __future__ import annotations

import numpy as np

from .grid import GridMap
from .steering import State


def check_grid(X, cell_size: float = 0.2) -> GridMap:
    """Coerce a GridMap or 2-D boolean-like array into a GridMap."""
    if isinstance(X, GridMap):
        return X
    occupancy = np.asarray(X)
    if occupancy.ndim != 2:
        raise ValueError(f"expected a GridMap or 2-D occupancy array, got ndim={occupancy.ndim}")
    return GridMap(occupancy.astype(bool), cell_size)


def check_pose(p) -> State:
    """Coerce a State or (x, y, theta) triple into a State."""
    if isinstance(p, State):
        return p
    arr = np.asarray(p, dtype=float).ravel()
    if arr.shape != (3,):
        raise ValueError("a pose needs exactly (x, y, theta)")
    return State(*arr)


def check_path(path) -> list[State]:
    """Coerce a waypoint sequence (States or an (n, 3) array) into a path."""
    if isinstance(path, (list, tuple)) and path and isinstance(path[0], State):
        return list(path)
    arr = np.asarray(path, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or len(arr) < 1:
        raise ValueError("a path must be an (n, 3) array of poses with n >= 1")
    return [State(*row) for row in arr]


def check_tasks(X) -> list[tuple[State, State]]:
    """Coerce an (n, 6) array of start/goal pose rows into task pairs."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 6:
        raise ValueError("tasks must be an (n, 6) array: sx, sy, stheta, gx, gy, gtheta")
    return [(State(*row[:3]), State(*row[3:])) for row in arr]
