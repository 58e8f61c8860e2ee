"""Scikit-learn style facade over the planning pipeline.

``GripsSmoother`` is a transformer: fit() binds an occupancy grid (and
precomputes its distance transform), transform() turns geometric paths into
kinematically feasible trajectories.  ``TrajectoryPlanner`` adds the
geometric front-end and predicts trajectories straight from start/goal
pose pairs.  Both expose every tunable as a constructor parameter, so they
compose with ``sklearn.base.clone``, ``get_params`` and grid search.
"""

from __future__ import annotations

import math

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import PlannerSettings
from .grid import distance_transform, inflate
from .phase1 import Phase1Config
from .planner import plan_trajectory, smoothing_stage
from .prune_grips import PruneOriginalConfig
from .prune_hs import PruneHSConfig
from .steering import RobotParams, SteerConfig, SteeringGains, Trajectory
from .validation import check_grid, check_path, check_pose, check_tasks


def _settings_from(est) -> PlannerSettings:
    return PlannerSettings(
        robot=RobotParams(
            wheelbase=est.wheelbase,
            v_max=est.v_max,
            a_max=est.a_max,
            gamma_max=est.gamma_max,
            radius=est.radius,
        ),
        gains=SteeringGains(k_rho=est.k_rho, k_alpha=est.k_alpha, k_beta=est.k_beta),
        steer=SteerConfig(
            dt=est.dt, max_steps=est.max_steps, pos_tol=est.pos_tol, ang_tol=est.ang_tol
        ),
        phase1=Phase1Config(
            eta0=est.eta0,
            discount=est.discount,
            move_rounds=est.move_rounds,
            d_min=est.d_min,
            insert_rounds=est.insert_rounds,
        ),
        prune=PruneOriginalConfig(max_rounds=est.max_prune_rounds),
        prune_hs=PruneHSConfig(
            horizon=est.horizon,
            max_offset=est.max_offset,
            sample_step=est.sample_step,
            extra_mode=est.extra_mode,
        ),
        cell_size=est.cell_size,
    )


class GripsSmoother(TransformerMixin, BaseEstimator):
    """Transform geometric paths into feasible trajectories on a fixed map.

    Parameters mirror the planning defaults; ``algorithm`` selects the
    baseline DAG pruner ('grips') or the heuristic-sampling variant
    ('grips-hs').  fit() takes the occupancy grid (GridMap or 2-D bool
    array); transform() maps a list of paths to a list of Trajectory or
    None per path.
    """

    def __init__(
        self,
        algorithm: str = "grips-hs",
        cell_size: float = 0.2,
        wheelbase: float = 2.0,
        v_max: float = 2.0,
        a_max: float = 0.4,
        gamma_max: float = math.pi / 4,
        radius: float = 0.5,
        k_rho: float = 5.0,
        k_alpha: float = 15.0,
        k_beta: float = -5.0,
        dt: float = 0.1,
        max_steps: int = 300,
        pos_tol: float = 0.2,
        ang_tol: float = math.pi,
        eta0: float = 1.0,
        discount: float = 0.8,
        move_rounds: int = 5,
        d_min: float = 1.0,
        insert_rounds: int = 1,
        max_prune_rounds: int = 50,
        horizon: int = 5,
        max_offset: float = 5.0,
        sample_step: float = 1.0,
        extra_mode: str = "perpendicular",
    ):
        self.algorithm = algorithm
        self.cell_size = cell_size
        self.wheelbase = wheelbase
        self.v_max = v_max
        self.a_max = a_max
        self.gamma_max = gamma_max
        self.radius = radius
        self.k_rho = k_rho
        self.k_alpha = k_alpha
        self.k_beta = k_beta
        self.dt = dt
        self.max_steps = max_steps
        self.pos_tol = pos_tol
        self.ang_tol = ang_tol
        self.eta0 = eta0
        self.discount = discount
        self.move_rounds = move_rounds
        self.d_min = d_min
        self.insert_rounds = insert_rounds
        self.max_prune_rounds = max_prune_rounds
        self.horizon = horizon
        self.max_offset = max_offset
        self.sample_step = sample_step
        self.extra_mode = extra_mode

    def fit(self, X, y=None):
        """Bind an occupancy grid and precompute its clearance field."""
        settings = _settings_from(self)  # validates parameters
        grid = check_grid(X, self.cell_size)
        self.grid_ = grid
        self.distance_map_ = distance_transform(grid)
        self.planning_grid_ = inflate(grid, self.distance_map_, settings.robot.radius)
        return self

    def transform(self, X) -> list[Trajectory | None]:
        """Smooth each path in X; None marks paths that could not be solved."""
        check_is_fitted(self, "distance_map_")
        settings = _settings_from(self)
        out = []
        for path in X:
            result = smoothing_stage(
                self.grid_, self.distance_map_, check_path(path), settings, self.algorithm
            )
            out.append(result.trajectory if result is not None else None)
        return out

    def smooth(self, path):
        """Single-path convenience wrapper around transform()."""
        return self.transform([path])[0]


class TrajectoryPlanner(BaseEstimator):
    """Full planner: any-angle front-end plus smoothing, as an estimator.

    fit() binds the map; predict() takes an (n, 6) array of
    (sx, sy, stheta, gx, gy, gtheta) rows in meters and returns one
    Trajectory or None per row.
    """

    def __init__(
        self,
        algorithm: str = "grips-hs",
        cell_size: float = 0.2,
        wheelbase: float = 2.0,
        v_max: float = 2.0,
        a_max: float = 0.4,
        gamma_max: float = math.pi / 4,
        radius: float = 0.5,
        k_rho: float = 5.0,
        k_alpha: float = 15.0,
        k_beta: float = -5.0,
        dt: float = 0.1,
        max_steps: int = 300,
        pos_tol: float = 0.2,
        ang_tol: float = math.pi,
        eta0: float = 1.0,
        discount: float = 0.8,
        move_rounds: int = 5,
        d_min: float = 1.0,
        insert_rounds: int = 1,
        max_prune_rounds: int = 50,
        horizon: int = 5,
        max_offset: float = 5.0,
        sample_step: float = 1.0,
        extra_mode: str = "perpendicular",
    ):
        self.algorithm = algorithm
        self.cell_size = cell_size
        self.wheelbase = wheelbase
        self.v_max = v_max
        self.a_max = a_max
        self.gamma_max = gamma_max
        self.radius = radius
        self.k_rho = k_rho
        self.k_alpha = k_alpha
        self.k_beta = k_beta
        self.dt = dt
        self.max_steps = max_steps
        self.pos_tol = pos_tol
        self.ang_tol = ang_tol
        self.eta0 = eta0
        self.discount = discount
        self.move_rounds = move_rounds
        self.d_min = d_min
        self.insert_rounds = insert_rounds
        self.max_prune_rounds = max_prune_rounds
        self.horizon = horizon
        self.max_offset = max_offset
        self.sample_step = sample_step
        self.extra_mode = extra_mode

    def fit(self, X, y=None):
        _settings_from(self)  # validates parameters
        grid = check_grid(X, self.cell_size)
        self.grid_ = grid
        self.distance_map_ = distance_transform(grid)
        return self

    def plan(self, start, goal):
        """PlanResult for one start/goal pose pair, or None on failure."""
        check_is_fitted(self, "distance_map_")
        return plan_trajectory(
            self.grid_,
            check_pose(start),
            check_pose(goal),
            settings=_settings_from(self),
            dmap=self.distance_map_,
            algorithm=self.algorithm,
        )

    def predict(self, X) -> list[Trajectory | None]:
        check_is_fitted(self, "distance_map_")
        out = []
        for start, goal in check_tasks(X):
            result = self.plan(start, goal)
            out.append(result.trajectory if result is not None else None)
        return out
