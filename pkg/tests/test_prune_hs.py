import math
import random

import numpy as np
import pytest

from pathsteer import (
    GridMap,
    PruneHSConfig,
    State,
    distance_transform,
    plan_trajectory,
    prune_modified,
    reach_next_states,
    skip_states,
    trajectory_collides,
    validate_trajectory,
)
from pathsteer.config import PlannerSettings
from pathsteer.grid import inflate
from pathsteer.prune_hs import candidate_offsets, extra_states

from test_prune_grips import fake_steer, line_path


@pytest.fixture(scope="module")
def corner():
    """Wall at x in [6.4, 6.8) m for y < 5 m; a-to-b clips it head on."""
    occ = np.zeros((70, 70), dtype=bool)
    occ[32:34, 0:25] = True
    grid = GridMap(occ)
    dmap = distance_transform(grid)
    a = State(3.0, 4.0, 0.2)
    b = State(10.0, 5.4, 0.2)
    return grid, dmap, a, b


def pair_steer(allowed, dt=0.1):
    """Steering stand-in succeeding only for whitelisted pose pairs."""
    base = fake_steer(math.inf, dt)

    def steer_fn(frm: State, to: State, v0: float = 0.0):
        result = base(frm, to, v0)
        if (frm, to) in allowed:
            return result
        return type(result)(base(frm, frm, v0).trajectory, False)

    return steer_fn


class TestConfig:
    def test_field_validation(self):
        with pytest.raises(ValueError):
            PruneHSConfig(horizon=0)
        with pytest.raises(ValueError):
            PruneHSConfig(sample_step=11.0, max_offset=5.0)
        with pytest.raises(ValueError):
            PruneHSConfig(extra_mode="random")

    def test_default_offsets_count(self):
        # max_offset 5 m at 1 m steps: 0 and +-1..5.
        offsets = candidate_offsets(PruneHSConfig())
        assert len(offsets) == 11
        assert offsets[0] == 0.0
        assert offsets[1] == 1.0 and offsets[2] == -1.0
        assert set(offsets) == {float(d) for d in range(-5, 6)}

    def test_sweep_order(self):
        offsets = candidate_offsets(PruneHSConfig(candidate_order="sweep"))
        assert offsets == [float(d) for d in range(-5, 6)]

    def test_offsets_deterministic(self):
        assert candidate_offsets(PruneHSConfig()) == candidate_offsets(PruneHSConfig())


class TestSkipStates:
    def test_skips_to_the_goal_when_everything_reaches(self, open64, steering, params):
        grid, dmap = open64
        path = [State(1 + 2 * i, 6, 0) for i in range(5)]
        out = skip_states(path, path[0], 0, steering, dmap, params.radius)
        assert out.new_index == len(path) - 1
        assert out.segment.end.distance_to(path[-1]) <= 0.2

    def test_stops_at_first_failure(self, open64, params):
        grid, dmap = open64
        path = line_path(5)
        out = skip_states(path, path[0], 0, fake_steer(1.5), dmap, params.radius)
        assert out.new_index == 1

    def test_result_is_maximal(self, open64, steering, params):
        grid, dmap = open64
        rng = random.Random(5)
        for _ in range(10):
            path = [State(1.0, rng.uniform(4, 8), 0.0)]
            for _ in range(4):
                last = path[-1]
                path.append(State(last.x + rng.uniform(1.0, 2.5), last.y + rng.uniform(-0.5, 0.5), 0.0))
            first = steering(path[0], path[1])
            if not first.reached:
                continue
            out = skip_states(path, path[0], 0, steering, dmap, params.radius, first=first)
            check = steering(path[0], path[out.new_index])
            assert check.reached and not trajectory_collides(dmap, check.trajectory, params.radius)
            if out.new_index < len(path) - 1:
                nxt = steering(path[0], path[out.new_index + 1])
                assert not nxt.reached or trajectory_collides(dmap, nxt.trajectory, params.radius)


class TestReachNextStates:
    def test_reaches_past_a_bad_waypoint(self, open64, params):
        grid, dmap = open64
        path = line_path(5)
        allowed = {(path[0], path[2])}
        out = reach_next_states(path, path[0], 0, PruneHSConfig(), pair_steer(allowed), dmap, params.radius)
        assert out is not None
        assert out.new_index == 2

    def test_all_attempts_fail(self, open64, params):
        grid, dmap = open64
        path = line_path(5)
        out = reach_next_states(path, path[0], 0, PruneHSConfig(), pair_steer(set()), dmap, params.radius)
        assert out is None

    def test_horizon_clamps_to_goal(self, open64, params):
        grid, dmap = open64
        path = line_path(4)
        allowed = {(path[0], path[3])}
        out = reach_next_states(
            path, path[0], 0, PruneHSConfig(horizon=50), pair_steer(allowed), dmap, params.radius
        )
        assert out is not None
        assert out.new_index == 3


class TestExtraStates:
    def test_bridges_a_clipped_wall(self, corner, steering, params):
        grid, dmap, a, b = corner
        pgrid = inflate(grid, dmap, params.radius)
        direct = steering(a, b)
        assert direct.reached and trajectory_collides(dmap, direct.trajectory, params.radius)
        out = extra_states(a, b, PruneHSConfig(), steering, pgrid, dmap, params.radius)
        assert out is not None
        candidate, first, second = out
        assert not trajectory_collides(dmap, first, params.radius)
        assert not trajectory_collides(dmap, second, params.radius)
        mid = ((a.x + b.x) / 2, (a.y + b.y) / 2)
        offset = math.hypot(candidate.x - mid[0], candidate.y - mid[1])
        assert offset >= 1.0 - 1e-9
        assert candidate.theta == pytest.approx(math.atan2(b.y - a.y, b.x - a.x))

    def test_every_candidate_blocked(self, steering, params):
        occ = np.ones((40, 40), dtype=bool)
        occ[:, 18:22] = False  # free horizontal corridor only
        grid = GridMap(occ)
        dmap = distance_transform(grid)
        a = State(2.0, 4.0, 0.0)
        b = State(6.0, 4.0, 0.0)
        out = extra_states(a, b, PruneHSConfig(), steering, grid, dmap, params.radius)
        assert out is None

    def test_heading_average_mode_samples_along_mean_heading(self, open64, steering, params):
        grid, dmap = open64
        a = State(2.0, 6.0, math.pi / 2)
        b = State(6.0, 6.0, math.pi / 2)
        cfg = PruneHSConfig(extra_mode="heading-average")
        blocked = np.zeros((64, 64), dtype=bool)
        blocked[20, 25:35] = True  # force the d=0 candidate to fail
        gmap = GridMap(blocked)
        gd = distance_transform(gmap)
        out = extra_states(a, b, cfg, steering, gmap, gd, params.radius)
        if out is not None:
            candidate = out[0]
            # Candidates live on the vertical line through the midpoint.
            assert candidate.x == pytest.approx((a.x + b.x) / 2, abs=1e-9)


class TestPruneModified:
    def test_straight_path_is_one_segment(self, open64, steering, params):
        grid, dmap = open64
        path = [State(1, 6, 0), State(4, 6, 0), State(8, 6, 0)]
        result = prune_modified(path, PruneHSConfig(), steering, grid, dmap, params.radius)
        assert result is not None
        assert result.waypoints == [path[0], path[2]]
        assert result.extra_states == []

    def test_bridge_instance_adds_exactly_one_new_state(self, corner, steering, params):
        grid, dmap, a, b = corner
        pgrid = inflate(grid, dmap, params.radius)
        result = prune_modified([a, b], PruneHSConfig(), steering, pgrid, dmap, params.radius)
        assert result is not None
        assert len(result.extra_states) == 1
        assert result.extra_states[0] not in [a, b]
        assert not trajectory_collides(dmap, result.trajectory, params.radius)

    def test_walled_off_bottleneck_fails(self, steering, params):
        occ = np.zeros((40, 40), dtype=bool)
        occ[20, :] = True  # impassable wall
        grid = GridMap(occ)
        dmap = distance_transform(grid)
        path = [State(2.0, 4.0, 0.0), State(6.0, 4.0, 0.0)]
        result = prune_modified(path, PruneHSConfig(), steering, grid, dmap, params.radius)
        assert result is None

    def test_single_waypoint_path(self, open64, steering, params):
        grid, dmap = open64
        only = State(3.0, 3.0, 1.0)
        result = prune_modified([only], PruneHSConfig(), steering, grid, dmap, params.radius)
        assert result is not None
        assert len(result.trajectory) == 1


class TestPlanTrajectory:
    def test_open_map_random_tasks(self, open64):
        grid, dmap = open64
        settings = PlannerSettings()
        rng = random.Random(17)
        solved = 0
        for _ in range(5):
            start = State(rng.uniform(2, 4), rng.uniform(2, 10), rng.uniform(-0.5, 0.5))
            goal = State(rng.uniform(9, 11), rng.uniform(2, 10), rng.uniform(-0.5, 0.5))
            result = plan_trajectory(grid, start, goal, settings, dmap)
            if result is None:
                continue
            assert validate_trajectory(dmap, result.trajectory, goal, settings) == []
            solved += 1
        assert solved >= 4

    def test_start_equals_goal(self, open64):
        grid, dmap = open64
        pose = State(*grid.cell_center(20, 20), 0.5)
        result = plan_trajectory(grid, pose, pose, PlannerSettings(), dmap)
        assert result is not None
        assert len(result.trajectory) == 1

    def test_enclosed_goal_fails_geometrically(self):
        occ = np.zeros((64, 64), dtype=bool)
        occ[30:45, 30] = True
        occ[30:45, 44] = True
        occ[30, 30:45] = True
        occ[44, 30:45] = True
        grid = GridMap(occ)
        goal = State(*grid.cell_center(37, 37), 0.0)
        start = State(2.0, 2.0, 0.0)
        assert plan_trajectory(grid, start, goal) is None

    def test_blocked_start_raises(self):
        occ = np.zeros((64, 64), dtype=bool)
        occ[10, 10] = True
        grid = GridMap(occ)
        with pytest.raises(ValueError):
            plan_trajectory(grid, State(*grid.cell_center(10, 10), 0.0), State(8.0, 8.0, 0.0))
