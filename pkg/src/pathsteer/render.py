"""Plain-text SVG rendering of maps, paths, and trajectories."""

from __future__ import annotations

import numpy as np

from .grid import GridMap
from .steering import State, Trajectory

_OBSTACLE_FILL = "#37474f"
_PATH_STROKE = "#e0a030"
_TRAJECTORY_STROKE = "#c0392b"
_EXTRA_FILL = "#2e8b57"


def _points(coords, grid: GridMap) -> str:
    # Cell-unit coordinates with the y axis flipped for screen orientation.
    s = grid.cell_size
    h = grid.height
    return " ".join(f"{x / s:.3f},{h - y / s:.3f}" for x, y in coords)


def render_svg(
    grid: GridMap,
    geometric_path: list[State] | None = None,
    trajectory: Trajectory | None = None,
    extra_states: list[State] | None = None,
) -> str:
    """Map with obstacle cells as rects and both curves as polylines.

    The viewBox matches the map dimensions (one unit per cell).  The
    geometric path is drawn with its waypoints as circles; the trajectory
    uses a distinct stroke.  Sampled bridge states, when given, show up as
    green dots.
    """
    w, h = grid.width, grid.height
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" '
        f'width="{4 * w}" height="{4 * h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#fafafa"/>',
    ]
    for x, y in np.argwhere(grid.occupancy):
        parts.append(
            f'<rect class="obstacle" x="{x}" y="{h - 1 - y}" width="1" height="1" '
            f'fill="{_OBSTACLE_FILL}"/>'
        )
    if geometric_path:
        pts = _points(((s.x, s.y) for s in geometric_path), grid)
        parts.append(
            f'<polyline class="geometric" points="{pts}" fill="none" '
            f'stroke="{_PATH_STROKE}" stroke-width="0.5"/>'
        )
        for s in geometric_path:
            cx, cy = s.x / grid.cell_size, h - s.y / grid.cell_size
            parts.append(
                f'<circle class="waypoint" cx="{cx:.3f}" cy="{cy:.3f}" r="0.8" '
                f'fill="{_PATH_STROKE}"/>'
            )
    if trajectory is not None and len(trajectory) > 1:
        pts = _points(trajectory.states[:, :2], grid)
        parts.append(
            f'<polyline class="trajectory" points="{pts}" fill="none" '
            f'stroke="{_TRAJECTORY_STROKE}" stroke-width="0.6"/>'
        )
    for s in extra_states or []:
        cx, cy = s.x / grid.cell_size, h - s.y / grid.cell_size
        parts.append(
            f'<circle class="extra" cx="{cx:.3f}" cy="{cy:.3f}" r="1.0" '
            f'fill="{_EXTRA_FILL}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
