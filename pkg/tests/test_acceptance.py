"""End-to-end acceptance suite.

Runs the full desk-scale comparison on the two bundled maps plus the
independent-oracle checks, printing one PASS/FAIL line per criterion.
Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import itertools
import math
import random
import statistics
import time

import numpy as np
import pytest

from oracles import astar_length, brute_force_clearance
from pathsteer import (
    Control,
    GridMap,
    PlannerSettings,
    PruneOriginalConfig,
    RobotParams,
    State,
    SteerConfig,
    SteeringGains,
    distance_transform,
    generate_scenarios,
    integrate_step,
    line_of_sight,
    normalize_angle,
    path_length,
    prune_original,
    run_benchmark,
    steer,
    theta_star,
    trajectory_collides,
    write_report,
)
from pathsteer.bench import strip_runtime_columns
from pathsteer.grid import points_clearance
from pathsteer.maps import bundled_maps
from pathsteer.steering import Steering

# Benchmark protocol: 50 seeded scenarios per bundled map, start/goal on
# cells at least 11 cells clear of obstacles and 42 cells apart.
BENCH_SEEDS = {"indoor": 1, "outdoor": 2}
N_SCENARIOS = 50
MIN_CLEARANCE = 11.0
MIN_SEPARATION = 42.0


def report(num, name, ok, detail):
    print(f"\nACCEPTANCE {num:>2} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} ({name}): {detail}"


@pytest.fixture(scope="module")
def bench():
    settings = PlannerSettings()
    maps = bundled_maps()
    scenarios = []
    for name in sorted(maps):
        scenarios += generate_scenarios(
            maps[name],
            N_SCENARIOS,
            min_clearance=MIN_CLEARANCE,
            seed=BENCH_SEEDS[name],
            map_id=name,
            min_separation=MIN_SEPARATION,
        )
    t0 = time.perf_counter()
    result = run_benchmark(maps, scenarios, ["grips", "grips-hs"], settings, keep_trajectories=True)
    elapsed = time.perf_counter() - t0
    goals = {
        (s.map_id, i): s.goal
        for name in sorted(maps)
        for i, s in enumerate([s for s in scenarios if s.map_id == name])
    }
    return maps, settings, result, elapsed, goals


def overall_rate(result, algorithm):
    rows = [r for r in result.rows if r.algorithm == algorithm]
    return sum(r.tasks * r.success_rate for r in rows) / sum(r.tasks for r in rows)


def mutual_successes(result):
    by_key = {}
    for t in result.tasks:
        by_key.setdefault((t.map_id, t.scenario), {})[t.algorithm] = t
    return [
        v
        for v in by_key.values()
        if all(a in v and v[a].success for a in ("grips", "grips-hs"))
    ]


class TestAcceptance:
    def test_criterion_01_comparative_success_rate(self, bench):
        _, _, result, elapsed, _ = bench
        grips = overall_rate(result, "grips")
        hs = overall_rate(result, "grips-hs")
        per_map = {
            (r.map_id, r.algorithm): r.success_rate for r in result.rows
        }
        ok = hs >= grips + 0.15 and hs >= 0.75 and elapsed < 120.0
        report(
            1,
            "comparative success rate",
            ok,
            f"grips={grips:.3f} grips-hs={hs:.3f} margin={hs - grips:+.3f} "
            f"per-map={ {k: round(v, 2) for k, v in per_map.items()} } elapsed={elapsed:.1f}s",
        )

    def test_criterion_02_runtime(self, bench):
        _, _, result, _, _ = bench
        mutual = mutual_successes(result)
        rt_grips = statistics.mean(v["grips"].runtime for v in mutual)
        rt_hs = statistics.mean(v["grips-hs"].runtime for v in mutual)
        report(
            2,
            "smoothing runtime",
            rt_hs <= rt_grips,
            f"mean over {len(mutual)} mutual successes: grips={rt_grips * 1e3:.1f}ms "
            f"grips-hs={rt_hs * 1e3:.1f}ms ratio={rt_hs / rt_grips:.2f}",
        )

    def test_criterion_03_length_parity(self, bench):
        _, _, result, _, _ = bench
        mutual = mutual_successes(result)
        len_grips = statistics.mean(v["grips"].length for v in mutual)
        len_hs = statistics.mean(v["grips-hs"].length for v in mutual)
        ratio = len_hs / len_grips
        report(
            3,
            "length parity",
            0.85 <= ratio <= 1.15,
            f"mean lengths over {len(mutual)} mutual successes: grips={len_grips:.1f}m "
            f"grips-hs={len_hs:.1f}m ratio={ratio:.3f}",
        )

    def test_criterion_04_kinematic_feasibility(self, bench):
        _, settings, result, _, goals = bench
        robot = settings.robot
        checked = 0
        worst_residual = 0.0
        for task in result.tasks:
            if task.trajectory is None:
                continue
            tr = task.trajectory
            if len(tr.controls):
                v = tr.controls[:, 0]
                assert v.min() >= -1e-9 and v.max() <= robot.v_max + 1e-9
                assert np.abs(tr.controls[:, 1]).max() <= robot.gamma_max + 1e-9
                dv = np.diff(v, prepend=tr.v0)
                assert np.abs(dv).max() <= robot.a_max * tr.dt + 1e-9
            replay = tr.state(0)
            for k in range(len(tr.controls)):
                replay = integrate_step(replay, Control(*tr.controls[k]), tr.dt, robot)
                residual = max(
                    abs(replay.x - tr.states[k + 1, 0]),
                    abs(replay.y - tr.states[k + 1, 1]),
                    abs(normalize_angle(replay.theta - tr.states[k + 1, 2])),
                )
                worst_residual = max(worst_residual, residual)
                assert residual <= 1e-9
            checked += 1
        report(
            4,
            "kinematic feasibility",
            checked > 0,
            f"{checked} trajectories; controls within limits; "
            f"worst re-integration residual {worst_residual:.2e}",
        )

    def test_criterion_05_collision_invariant(self, bench):
        maps, settings, result, _, _ = bench
        dmaps = {name: distance_transform(grid) for name, grid in maps.items()}
        violations = 0
        checked = 0
        for task in result.tasks:
            if task.trajectory is None:
                continue
            dmap = dmaps[task.map_id]
            clear = points_clearance(dmap, task.trajectory.states[:, :2])
            violations += int((clear < settings.robot.radius).sum())
            if trajectory_collides(dmap, task.trajectory, settings.robot.radius):
                violations += 1
            checked += 1
        report(
            5,
            "collision invariant",
            checked > 0 and violations == 0,
            f"{checked} trajectories, {violations} clearance violations",
        )

    def test_criterion_06_distance_transform_oracle(self):
        rng = random.Random(606)
        t0 = time.perf_counter()
        exact = 0
        for _ in range(50):
            density = rng.uniform(0.1, 0.4)
            occ = np.array(
                [[rng.random() < density for _ in range(32)] for _ in range(32)], dtype=bool
            )
            grid = GridMap(occ)
            dmap = distance_transform(grid)
            ref = brute_force_clearance(occ, grid.cell_size)
            if np.array_equal(dmap.clearance, ref):
                exact += 1
        elapsed = time.perf_counter() - t0
        report(
            6,
            "distance transform oracle",
            exact == 50 and elapsed < 5.0,
            f"{exact}/50 maps bitwise-exact vs brute force in {elapsed:.2f}s",
        )

    def test_criterion_07_theta_star_validity(self):
        rng = random.Random(707)
        t0 = time.perf_counter()
        solved = 0
        while solved < 100:
            occ = np.array(
                [[rng.random() < 0.2 for _ in range(64)] for _ in range(64)], dtype=bool
            )
            grid = GridMap(occ)
            a = (rng.randrange(64), rng.randrange(64))
            b = (rng.randrange(64), rng.randrange(64))
            if occ[a] or occ[b]:
                continue
            oracle = astar_length(occ, a, b)
            path = theta_star(grid, a, b)
            if oracle is None:
                assert path is None
                continue
            assert path is not None
            cells = [grid.cell_of(s.x, s.y) for s in path]
            for u, w in zip(cells, cells[1:]):
                assert line_of_sight(grid, u, w)
            assert path_length(path) <= oracle * grid.cell_size + 1e-6
            solved += 1
        elapsed = time.perf_counter() - t0
        report(
            7,
            "any-angle planner validity",
            elapsed < 30.0,
            f"100 tasks: pairwise line-of-sight holds, length <= grid A* oracle; {elapsed:.1f}s",
        )

    def test_criterion_08_dag_prune_oracle(self):
        settings = PlannerSettings()
        steering = Steering(settings.steer, settings.gains, settings.robot)
        grid = GridMap(np.zeros((128, 128), dtype=bool), cell_size=0.6)
        dmap = distance_transform(grid)
        radius = settings.robot.radius
        rng = random.Random(808)
        worst = 0.0
        for _ in range(25):
            n = rng.randint(5, 8)
            path = [State(8.0, rng.uniform(25.0, 50.0), 0.0)]
            heading = 0.0
            while len(path) < n:
                last = path[-1]
                heading = max(-0.7, min(0.7, heading + rng.uniform(-0.3, 0.3)))
                step = rng.uniform(2.2, 3.2)
                path.append(
                    State(
                        last.x + step * math.cos(heading),
                        last.y + step * math.sin(heading),
                        heading,
                    )
                )

            cache = {}

            def edge(i, j):
                # Completed length, the same metric the DAG optimizes.
                if (i, j) not in cache:
                    res = steering(path[i], path[j])
                    ok = res.reached and not trajectory_collides(dmap, res.trajectory, radius)
                    cache[(i, j)] = (
                        ok,
                        res.trajectory.length + res.trajectory.end.distance_to(path[j]),
                    )
                return cache[(i, j)]

            best = math.inf
            interior = range(1, n - 1)
            for mask in itertools.chain.from_iterable(
                itertools.combinations(interior, k) for k in range(n - 1)
            ):
                chain = [0, *mask, n - 1]
                total = 0.0
                for i, j in zip(chain, chain[1:]):
                    ok, length = edge(i, j)
                    if not ok:
                        total = math.inf
                        break
                    total += length
                best = min(best, total)

            result = prune_original(path, steering, dmap, radius, PruneOriginalConfig())
            assert result is not None and best < math.inf
            indices = [path.index(w) for w in result.waypoints]
            chosen = sum(edge(i, j)[1] for i, j in zip(indices, indices[1:]))
            worst = max(worst, abs(chosen - best))
            assert abs(chosen - best) <= 1e-6
        report(
            8,
            "DAG prune vs exhaustive enumeration",
            True,
            f"25 instances, worst selected-vs-optimal gap {worst:.2e} m",
        )

    def test_criterion_09_steering_convergence(self):
        # Threshold locked at 95% after the measurement sweep;
        # the committed rate on this seed is 0.985.
        cfg, gains, params = SteerConfig(), SteeringGains(), RobotParams()
        rng = random.Random(424242)
        reached = 0
        n = 1000
        for _ in range(n):
            bearing = rng.uniform(-math.pi / 3, math.pi / 3)
            r = rng.uniform(2.0, 15.0)
            theta_g = bearing + rng.uniform(-math.pi / 4, math.pi / 4)
            target = State(r * math.cos(bearing), r * math.sin(bearing), theta_g)
            reached += steer(State(0, 0, 0), target, cfg, gains, params).reached
        rate = reached / n
        report(
            9,
            "steering convergence",
            rate >= 0.95,
            f"forward-cone boundary value problems: {reached}/{n} reached ({rate:.3f})",
        )

    def test_criterion_10_determinism(self):
        settings = PlannerSettings()
        maps = bundled_maps()
        scenarios = []
        for name in sorted(maps):
            scenarios += generate_scenarios(
                maps[name], 15, MIN_CLEARANCE, seed=BENCH_SEEDS[name], map_id=name,
                min_separation=MIN_SEPARATION,
            )
        first = run_benchmark(maps, scenarios, ["grips", "grips-hs"], settings)
        second = run_benchmark(maps, scenarios, ["grips", "grips-hs"], settings)
        a = strip_runtime_columns(write_report(first))
        b = strip_runtime_columns(write_report(second))
        lengths_a = [t.length for t in first.tasks]
        lengths_b = [t.length for t in second.tasks]
        ok = a == b and lengths_a == lengths_b
        report(
            10,
            "benchmark determinism",
            ok,
            f"two runs over {len(scenarios)} scenarios: reports identical modulo runtime",
        )
