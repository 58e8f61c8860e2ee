"""Occupancy grids, Moving AI map I/O, line of sight, and clearance fields.

Conventions used throughout the package:

* ``occupancy[x, y]`` is True for blocked cells; x runs along the map width.
* Cell ``(x, y)`` spans ``[x, x+1) * [y, y+1)`` in cell units, so its center
  sits at ``(x + 0.5, y + 0.5)`` cell units, i.e. ``((x + 0.5) * cell_size,
  (y + 0.5) * cell_size)`` in meters.
* Everything outside the grid counts as blocked.  This keeps clearance
  well-defined everywhere and makes clearance gradients point inward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
from scipy import ndimage

FREE_CHARS = frozenset(".GS")
BLOCKED_CHARS = frozenset("@OTW")

Cell = tuple[int, int]


class MapFormatError(ValueError):
    """Raised when a Moving AI map file fails to parse."""


class Vec2(NamedTuple):
    dx: float
    dy: float


ZERO_VEC = Vec2(0.0, 0.0)


@dataclass(frozen=True, eq=False)
class GridMap:
    """Boolean occupancy grid with a fixed metric cell size."""

    occupancy: np.ndarray
    cell_size: float = 0.2

    def __post_init__(self):
        occ = np.ascontiguousarray(self.occupancy, dtype=bool)
        if occ.ndim != 2 or occ.shape[0] < 1 or occ.shape[1] < 1:
            raise ValueError("occupancy must be a non-empty 2-D array")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @property
    def width(self) -> int:
        return self.occupancy.shape[0]

    @property
    def height(self) -> int:
        return self.occupancy.shape[1]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, x: int, y: int) -> bool:
        """True iff cell (x, y) exists and is not blocked."""
        return self.in_bounds(x, y) and not self.occupancy[x, y]

    def cell_center(self, x: int, y: int) -> tuple[float, float]:
        """Center of cell (x, y) in meters."""
        return (x + 0.5) * self.cell_size, (y + 0.5) * self.cell_size

    def cell_of(self, x_m: float, y_m: float) -> Cell:
        """Cell containing a metric position (may be out of bounds)."""
        return math.floor(x_m / self.cell_size), math.floor(y_m / self.cell_size)


@dataclass(frozen=True, eq=False)
class DistanceMap:
    """Euclidean clearance field over a grid.

    ``clearance[x, y]`` is the distance in meters from the center of cell
    (x, y) to the nearest blocked cell center, counting every out-of-bounds
    cell as blocked.  Blocked cells have clearance exactly 0.
    """

    clearance: np.ndarray
    cell_size: float

    def __post_init__(self):
        clr = np.ascontiguousarray(self.clearance, dtype=float)
        clr.setflags(write=False)
        object.__setattr__(self, "clearance", clr)

    @property
    def width(self) -> int:
        return self.clearance.shape[0]

    @property
    def height(self) -> int:
        return self.clearance.shape[1]

    def cell_clearance(self, x: int, y: int) -> float:
        """Clearance of a cell; 0 for out-of-range cells."""
        if 0 <= x < self.width and 0 <= y < self.height:
            return float(self.clearance[x, y])
        return 0.0


def load_movingai(text: str, cell_size: float = 0.2) -> GridMap:
    """Parse a Moving AI ``.map`` file.

    The format is four header lines (``type ...``, ``height H``, ``width W``,
    ``map``) followed by H rows of W characters.  ``.``, ``G`` and ``S`` are
    free; ``@``, ``O``, ``T`` and ``W`` are blocked.

    Raises MapFormatError naming the offending line on malformed headers,
    short/long rows, or unknown cell characters.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip().lower().startswith("type"):
        raise MapFormatError("line 1: expected 'type ...' header")
    height = width = None
    idx = 1
    while idx < len(lines):
        stripped = lines[idx].strip()
        if stripped.lower() == "map":
            idx += 1
            break
        parts = stripped.split()
        if len(parts) == 2 and parts[0].lower() in ("height", "width"):
            try:
                value = int(parts[1])
            except ValueError:
                raise MapFormatError(f"line {idx + 1}: bad integer in '{stripped}'") from None
            if value <= 0:
                raise MapFormatError(f"line {idx + 1}: {parts[0]} must be positive")
            if parts[0].lower() == "height":
                height = value
            else:
                width = value
            idx += 1
        else:
            raise MapFormatError(f"line {idx + 1}: unexpected header line '{stripped}'")
    else:
        raise MapFormatError("missing 'map' header line")
    if height is None or width is None:
        raise MapFormatError("header must declare both height and width")

    occupancy = np.zeros((width, height), dtype=bool)
    for row in range(height):
        lineno = idx + row + 1
        if idx + row >= len(lines):
            raise MapFormatError(f"line {lineno}: expected {height} map rows, got {row}")
        row_text = lines[idx + row].rstrip("\r\n")
        if len(row_text) != width:
            raise MapFormatError(
                f"line {lineno}: row has {len(row_text)} cells, expected {width}"
            )
        for col, ch in enumerate(row_text):
            if ch in BLOCKED_CHARS:
                occupancy[col, row] = True
            elif ch not in FREE_CHARS:
                raise MapFormatError(f"line {lineno}: unknown cell character '{ch}'")
    return GridMap(occupancy, cell_size)


def dumps_movingai(grid: GridMap) -> str:
    """Serialize a grid back to Moving AI text ('.' free, '@' blocked)."""
    rows = []
    for y in range(grid.height):
        rows.append("".join("@" if grid.occupancy[x, y] else "." for x in range(grid.width)))
    header = f"type octile\nheight {grid.height}\nwidth {grid.width}\nmap\n"
    return header + "\n".join(rows) + "\n"


def supercover_line(a: Cell, b: Cell) -> list[Cell]:
    """Every cell touched by the segment between the centers of a and b.

    Exact integer arithmetic.  When the segment passes exactly through a
    lattice corner the two side cells are included as well, so the traversal
    never tunnels diagonally between blocked cells.
    """
    x, y = a
    x1, y1 = b
    cells = [(x, y)]
    dx = x1 - x
    dy = y1 - y
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    adx, ady = abs(dx), abs(dy)
    kx = ky = 0  # boundary crossings done per axis
    while (x, y) != (x1, y1):
        # Next crossing times are (2k+1)/(2*ad) per axis; compare via
        # cross-multiplication to stay in integers.
        cx = (2 * kx + 1) * ady
        cy = (2 * ky + 1) * adx
        if cx < cy:
            x += sx
            kx += 1
        elif cx > cy:
            y += sy
            ky += 1
        else:
            cells.append((x + sx, y))
            cells.append((x, y + sy))
            x += sx
            y += sy
            kx += 1
            ky += 1
        cells.append((x, y))
    return cells


def line_of_sight(grid: GridMap, a: Cell, b: Cell) -> bool:
    """True iff the segment between the centers of cells a and b stays free.

    Uses the supercover traversal, so a segment grazing the corner of a
    blocked cell is reported as obstructed.
    """
    if not grid.in_bounds(*a) or not grid.in_bounds(*b):
        raise ValueError("line_of_sight endpoints must be in bounds")
    occ = grid.occupancy
    for x, y in supercover_line(a, b):
        if occ[x, y]:
            return False
    return True


def traverse_cells(px: float, py: float, qx: float, qy: float) -> Iterator[Cell]:
    """Cells visited by a segment between two continuous cell-unit points.

    Floating-point companion of :func:`supercover_line` for off-lattice
    endpoints; near-corner crossings conservatively include both side cells.
    """
    x, y = math.floor(px), math.floor(py)
    x1, y1 = math.floor(qx), math.floor(qy)
    yield (x, y)
    dx, dy = qx - px, qy - py
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    inf = math.inf
    tdx = abs(1.0 / dx) if dx else inf
    tdy = abs(1.0 / dy) if dy else inf
    if dx > 0:
        tmx = (x + 1 - px) * tdx
    elif dx < 0:
        tmx = (px - x) * tdx
    else:
        tmx = inf
    if dy > 0:
        tmy = (y + 1 - py) * tdy
    elif dy < 0:
        tmy = (py - y) * tdy
    else:
        tmy = inf
    while (x, y) != (x1, y1):
        if min(tmx, tmy) > 1.0 + 1e-9:
            # Guards against float drift when q sits exactly on a boundary.
            break
        if abs(tmx - tmy) < 1e-12:
            yield (x + sx, y)
            yield (x, y + sy)
            x += sx
            y += sy
            tmx += tdx
            tmy += tdy
        elif tmx < tmy:
            x += sx
            tmx += tdx
        else:
            y += sy
            tmy += tdy
        yield (x, y)


def position_free(grid: GridMap, x_m: float, y_m: float) -> bool:
    """True iff the metric position falls inside a free cell."""
    return grid.is_free(*grid.cell_of(x_m, y_m))


def segment_free(grid: GridMap, p: tuple[float, float], q: tuple[float, float]) -> bool:
    """True iff the metric segment p-q crosses free cells only."""
    s = grid.cell_size
    occ = grid.occupancy
    w, h = grid.width, grid.height
    for x, y in traverse_cells(p[0] / s, p[1] / s, q[0] / s, q[1] / s):
        if not (0 <= x < w and 0 <= y < h) or occ[x, y]:
            return False
    return True


def distance_transform(grid: GridMap) -> DistanceMap:
    """Exact Euclidean distance transform under the cell-center metric.

    Out-of-bounds cells count as obstacles, which is realized by padding the
    grid with a blocked ring before the transform (the nearest out-of-bounds
    cell center always lies in that first ring).
    """
    padded = np.pad(grid.occupancy, 1, constant_values=True)
    dist = ndimage.distance_transform_edt(~padded)[1:-1, 1:-1]
    return DistanceMap(dist * grid.cell_size, grid.cell_size)


def inflate(grid: GridMap, dmap: DistanceMap, radius: float) -> GridMap:
    """Grid whose blocked set grows to every cell with clearance < radius."""
    return GridMap(dmap.clearance < radius, grid.cell_size)


def state_clearance(dmap: DistanceMap, x_m: float, y_m: float) -> float:
    """Clearance at a continuous position, in meters.

    Bilinear interpolation of the four surrounding cell-center clearances;
    cells outside the grid contribute 0, and positions outside the map
    return 0 outright.
    """
    s = dmap.cell_size
    if not (0.0 <= x_m <= dmap.width * s and 0.0 <= y_m <= dmap.height * s):
        return 0.0
    u = x_m / s - 0.5
    v = y_m / s - 0.5
    i0 = math.floor(u)
    j0 = math.floor(v)
    fx = u - i0
    fy = v - j0
    c00 = dmap.cell_clearance(i0, j0)
    c10 = dmap.cell_clearance(i0 + 1, j0)
    c01 = dmap.cell_clearance(i0, j0 + 1)
    c11 = dmap.cell_clearance(i0 + 1, j0 + 1)
    return (
        c00 * (1 - fx) * (1 - fy)
        + c10 * fx * (1 - fy)
        + c01 * (1 - fx) * fy
        + c11 * fx * fy
    )


def points_clearance(dmap: DistanceMap, pts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`state_clearance` over an (n, 2) array of positions."""
    pts = np.asarray(pts, dtype=float)
    s = dmap.cell_size
    u = pts[:, 0] / s - 0.5
    v = pts[:, 1] / s - 0.5
    i0 = np.floor(u).astype(np.int64)
    j0 = np.floor(v).astype(np.int64)
    fx = u - i0
    fy = v - j0
    # Zero-padded lookup table: index -1 and width/height land on zeros.
    table = np.zeros((dmap.width + 2, dmap.height + 2))
    table[1:-1, 1:-1] = dmap.clearance
    ic = np.clip(i0, -1, dmap.width) + 1
    jc = np.clip(j0, -1, dmap.height) + 1
    ic1 = np.clip(i0 + 1, -1, dmap.width) + 1
    jc1 = np.clip(j0 + 1, -1, dmap.height) + 1
    out = (
        table[ic, jc] * (1 - fx) * (1 - fy)
        + table[ic1, jc] * fx * (1 - fy)
        + table[ic, jc1] * (1 - fx) * fy
        + table[ic1, jc1] * fx * fy
    )
    inside = (
        (pts[:, 0] >= 0.0)
        & (pts[:, 0] <= dmap.width * s)
        & (pts[:, 1] >= 0.0)
        & (pts[:, 1] <= dmap.height * s)
    )
    return np.where(inside, out, 0.0)


def gradient_at(dmap: DistanceMap, x_m: float, y_m: float) -> Vec2:
    """Unit gradient of the interpolated clearance field at a position.

    Central finite differences with a half-cell step.  Positions less than
    one cell inside the map, and plateaus of the field, yield the zero
    vector so that a gradient step degrades to a no-op.
    """
    s = dmap.cell_size
    if not (s <= x_m <= (dmap.width - 1) * s and s <= y_m <= (dmap.height - 1) * s):
        return ZERO_VEC
    h = 0.5 * s
    gx = (state_clearance(dmap, x_m + h, y_m) - state_clearance(dmap, x_m - h, y_m)) / (2 * h)
    gy = (state_clearance(dmap, x_m, y_m + h) - state_clearance(dmap, x_m, y_m - h)) / (2 * h)
    norm = math.hypot(gx, gy)
    if norm <= 1e-9:
        return ZERO_VEC
    return Vec2(gx / norm, gy / norm)
