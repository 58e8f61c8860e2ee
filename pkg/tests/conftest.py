import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pathsteer import (
    DistanceMap,
    GridMap,
    RobotParams,
    SteerConfig,
    Steering,
    SteeringGains,
    distance_transform,
)


@pytest.fixture(scope="session")
def params():
    return RobotParams()


@pytest.fixture(scope="session")
def gains():
    return SteeringGains()


@pytest.fixture(scope="session")
def steer_cfg():
    return SteerConfig()


@pytest.fixture(scope="session")
def steering(steer_cfg, gains, params):
    return Steering(steer_cfg, gains, params)


def free_grid(width, height=None, cell_size=0.2):
    return GridMap(np.zeros((width, height or width), dtype=bool), cell_size)


@pytest.fixture(scope="session")
def open64():
    """64x64 free map with its distance map (12.8 m square)."""
    grid = free_grid(64)
    return grid, distance_transform(grid)


@pytest.fixture(scope="session")
def flat_dmap():
    """Idealized clearance field: constant 5 m everywhere on a 64x64 grid."""
    return DistanceMap(np.full((64, 64), 5.0), 0.2)
