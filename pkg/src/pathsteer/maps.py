"""Deterministic desk-scale benchmark maps.

Two 128x128 environments mirror the classic benchmark mix: an indoor map of
rooms joined by door gaps, and an outdoor map of scattered blobs.  Both are
seeded so every build of the package produces bit-identical grids, and both
keep their passages a few turning diameters wide: a 2 m wheelbase car with
a 45 degree steering limit needs real room to maneuver.
"""

from __future__ import annotations

import random

import numpy as np

from .grid import GridMap


def _border(occ: np.ndarray, thickness: int = 2) -> None:
    occ[:, :thickness] = True
    occ[:, -thickness:] = True
    occ[:thickness, :] = True
    occ[-thickness:, :] = True


def indoor_map(
    size: int = 128,
    cell_size: float = 0.6,
    seed: int = 7,
    door_width: int = 11,
) -> GridMap:
    """Nine rooms on a 3x3 grid, one door per wall segment.

    Cross-map routes thread several doors with turns in between, which is
    the maneuver that separates the pruning strategies.
    """
    rng = random.Random(seed)
    occ = np.zeros((size, size), dtype=bool)
    _border(occ)
    cuts = [0, size // 3, 2 * size // 3, size]
    for wall in cuts[1:-1]:
        occ[wall - 1 : wall + 1, :] = True
        occ[:, wall - 1 : wall + 1] = True
    for axis in (0, 1):
        for wall in cuts[1:-1]:
            for lo, hi in zip(cuts, cuts[1:]):
                span = hi - lo - door_width - 6
                pos = lo + 3 + rng.randint(span // 4, 3 * span // 4)
                if axis == 0:
                    occ[wall - 3 : wall + 3, pos : pos + door_width] = False
                else:
                    occ[pos : pos + door_width, wall - 3 : wall + 3] = False
    return GridMap(occ, cell_size)


def outdoor_map(
    size: int = 128,
    cell_size: float = 0.6,
    seed: int = 11,
    n_blobs: int = 12,
    min_gap: int = 14,
) -> GridMap:
    """Scattered round and square blobs with wide corridors between them.

    Blob edges stay min_gap cells apart (and away from the border), so the
    map never produces passages the robot cannot physically take.
    """
    rng = random.Random(seed)
    occ = np.zeros((size, size), dtype=bool)
    _border(occ)
    xs, ys = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    placed: list[tuple[int, int, int]] = []
    attempts = 0
    while len(placed) < n_blobs and attempts < 2000:
        attempts += 1
        r = rng.randint(3, 7)
        margin = r + min_gap // 2 + 2
        cx = rng.randint(margin, size - margin)
        cy = rng.randint(margin, size - margin)
        if any(
            (cx - px) ** 2 + (cy - py) ** 2 < (r + pr + min_gap) ** 2 for px, py, pr in placed
        ):
            continue
        placed.append((cx, cy, r))
        if rng.random() < 0.3:
            occ[cx - r : cx + r + 1, cy - r : cy + r + 1] = True
        else:
            occ |= (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
    return GridMap(occ, cell_size)


def bundled_maps(cell_size: float = 0.6) -> dict[str, GridMap]:
    """The two benchmark maps, keyed by id."""
    return {
        "indoor": indoor_map(cell_size=cell_size),
        "outdoor": outdoor_map(cell_size=cell_size),
    }
