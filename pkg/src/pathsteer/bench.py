"""Scenario generation, benchmark execution, and report emission.

A benchmark task is one (scenario, algorithm) pair.  The geometric path is
planned once per scenario and shared by every algorithm; scenarios the
geometric planner cannot solve are dropped from every algorithm's
denominator.  Only the smoothing stage is timed.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import PlannerSettings
from .grid import DistanceMap, GridMap, distance_transform
from .planner import ALGORITHMS, geometric_stage, smoothing_stage, validate_trajectory
from .steering import State, Trajectory, normalize_angle

CSV_HEADER = "map,algorithm,tasks,success_rate,mean_length_m,mean_runtime_s"


@dataclass(frozen=True)
class Scenario:
    map_id: str
    start: State
    goal: State
    seed: int = 0


@dataclass
class TaskResult:
    scenario: int  # index within the scenario list of its map
    map_id: str
    algorithm: str
    success: bool
    length: float | None
    runtime: float
    error: str | None = None
    trajectory: Trajectory | None = None


@dataclass(frozen=True)
class ReportRow:
    map_id: str
    algorithm: str
    tasks: int
    success_rate: float
    mean_length: float | None
    mean_runtime: float


@dataclass
class BenchReport:
    rows: list[ReportRow]
    tasks: list[TaskResult]
    geometric_failures: dict[str, int] = field(default_factory=dict)


def generate_scenarios(
    grid: GridMap,
    n: int,
    min_clearance: float,
    seed: int,
    map_id: str = "map",
    min_separation: float = 10.0,
    dmap: DistanceMap | None = None,
) -> list[Scenario]:
    """Seeded random tasks with start/goal on well-cleared cells.

    min_clearance and min_separation are in cells.  Positions are uniform
    over the qualifying cell centers, rejection-sampled until start and
    goal are distinct and far enough apart; headings are uniform.
    Raises ValueError when the map cannot host such a pair.
    """
    dmap = dmap if dmap is not None else distance_transform(grid)
    threshold = min_clearance * grid.cell_size
    qualifying = np.argwhere(dmap.clearance >= threshold)
    if len(qualifying) < 2:
        raise ValueError("map has no two cells satisfying the clearance bound")
    rng = random.Random(seed)
    sep = min_separation * grid.cell_size
    scenarios = []
    for _ in range(n):
        for _attempt in range(10_000):
            sx, sy = qualifying[rng.randrange(len(qualifying))]
            gx, gy = qualifying[rng.randrange(len(qualifying))]
            if (sx, sy) == (gx, gy):
                continue
            start = grid.cell_center(int(sx), int(sy))
            goal = grid.cell_center(int(gx), int(gy))
            if math.dist(start, goal) >= sep:
                break
        else:
            raise ValueError("could not place start and goal far enough apart")
        scenarios.append(
            Scenario(
                map_id,
                State(*start, normalize_angle(rng.uniform(-math.pi, math.pi))),
                State(*goal, normalize_angle(rng.uniform(-math.pi, math.pi))),
                seed,
            )
        )
    return scenarios


def write_scenarios(scenarios: list[Scenario], cell_size: float) -> str:
    """Scenario text: one task per line, positions in cells.

    Format: ``map_id sx sy stheta gx gy gtheta`` (whitespace-separated,
    angles in radians); lines starting with '#' are comments.
    """
    lines = ["# map_id sx sy stheta gx gy gtheta  (positions in cells, angles in radians)"]
    for s in scenarios:
        c = cell_size
        lines.append(
            f"{s.map_id} {s.start.x / c:.6f} {s.start.y / c:.6f} {s.start.theta:.9f} "
            f"{s.goal.x / c:.6f} {s.goal.y / c:.6f} {s.goal.theta:.9f}"
        )
    return "\n".join(lines) + "\n"


def read_scenarios(text: str, cell_size: float) -> list[Scenario]:
    scenarios = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 7:
            raise ValueError(f"scenario line {lineno}: expected 7 fields, got {len(parts)}")
        map_id = parts[0]
        try:
            sx, sy, st, gx, gy, gt = (float(p) for p in parts[1:])
        except ValueError:
            raise ValueError(f"scenario line {lineno}: bad number") from None
        scenarios.append(
            Scenario(
                map_id,
                State(sx * cell_size, sy * cell_size, st),
                State(gx * cell_size, gy * cell_size, gt),
            )
        )
    return scenarios


def _run_scenario(args) -> list[TaskResult]:
    (index, scenario, grid, dmap, algorithms, settings, keep, validate) = args
    results = []
    try:
        path = geometric_stage(grid, dmap, scenario.start, scenario.goal, settings)
    except ValueError as exc:
        path = None
        geo_error = f"input error: {exc}"
    else:
        geo_error = "no geometric path"
    if path is None:
        # Sentinel consumed by run_benchmark: excluded from denominators.
        return [TaskResult(index, scenario.map_id, "geometric", False, None, 0.0, geo_error)]
    for algorithm in algorithms:
        t0 = time.perf_counter()
        try:
            outcome = smoothing_stage(grid, dmap, path, settings, algorithm)
        except Exception as exc:  # failed task, not a failed benchmark
            runtime = time.perf_counter() - t0
            results.append(
                TaskResult(index, scenario.map_id, algorithm, False, None, runtime, repr(exc))
            )
            continue
        runtime = time.perf_counter() - t0
        if outcome is None:
            results.append(TaskResult(index, scenario.map_id, algorithm, False, None, runtime))
            continue
        error = None
        if validate:
            problems = validate_trajectory(dmap, outcome.trajectory, scenario.goal, settings)
            if problems:
                error = "; ".join(problems)
        results.append(
            TaskResult(
                index,
                scenario.map_id,
                algorithm,
                error is None,
                outcome.trajectory.length if error is None else None,
                runtime,
                error,
                outcome.trajectory if keep else None,
            )
        )
    return results


def run_benchmark(
    maps: dict[str, GridMap],
    scenarios: list[Scenario],
    algorithms: list[str] | None = None,
    settings: PlannerSettings | None = None,
    jobs: int = 1,
    keep_trajectories: bool = False,
    validate: bool = True,
) -> BenchReport:
    """Run every (scenario, algorithm) task and aggregate per map.

    Tasks are independent; with jobs > 1 they run in worker processes.
    Every reported success has passed the full trajectory invariant suite
    unless validate is disabled.
    """
    algorithms = list(algorithms) if algorithms is not None else list(ALGORITHMS)
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{algorithm}'")
    settings = settings if settings is not None else PlannerSettings()
    dmaps = {map_id: distance_transform(grid) for map_id, grid in maps.items()}
    per_map_index: dict[str, int] = {}
    work = []
    for scenario in scenarios:
        if scenario.map_id not in maps:
            raise ValueError(f"scenario references unknown map '{scenario.map_id}'")
        index = per_map_index.get(scenario.map_id, 0)
        per_map_index[scenario.map_id] = index + 1
        work.append(
            (
                index,
                scenario,
                maps[scenario.map_id],
                dmaps[scenario.map_id],
                algorithms,
                settings,
                keep_trajectories,
                validate,
            )
        )

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_scenario, work))
    else:
        chunks = [_run_scenario(item) for item in work]

    tasks: list[TaskResult] = []
    geometric_failures: dict[str, int] = {}
    for chunk in chunks:
        if len(chunk) == 1 and chunk[0].algorithm == "geometric":
            failed = chunk[0]
            geometric_failures[failed.map_id] = geometric_failures.get(failed.map_id, 0) + 1
            continue
        tasks.extend(chunk)
    tasks.sort(key=lambda t: (t.map_id, t.scenario, t.algorithm))

    rows = []
    for map_id in sorted(maps):
        for algorithm in algorithms:
            group = [t for t in tasks if t.map_id == map_id and t.algorithm == algorithm]
            if not group:
                continue
            successes = [t for t in group if t.success]
            mean_length = (
                sum(t.length for t in successes) / len(successes) if successes else None
            )
            rows.append(
                ReportRow(
                    map_id,
                    algorithm,
                    len(group),
                    len(successes) / len(group),
                    mean_length,
                    sum(t.runtime for t in group) / len(group),
                )
            )
    return BenchReport(rows, tasks, geometric_failures)


def write_report(report: BenchReport, fmt: str = "csv") -> str:
    """Render a report as CSV (aggregate rows) or JSON (rows + tasks)."""
    if fmt == "csv":
        lines = [CSV_HEADER]
        for row in report.rows:
            length = f"{row.mean_length:.4f}" if row.mean_length is not None else ""
            lines.append(
                f"{row.map_id},{row.algorithm},{row.tasks},"
                f"{row.success_rate:.4f},{length},{row.mean_runtime:.6f}"
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "rows": [
                {
                    "map": row.map_id,
                    "algorithm": row.algorithm,
                    "tasks": row.tasks,
                    "success_rate": round(row.success_rate, 4),
                    "mean_length_m": row.mean_length,
                    "mean_runtime_s": row.mean_runtime,
                }
                for row in report.rows
            ],
            "tasks": [
                {
                    "scenario": t.scenario,
                    "map": t.map_id,
                    "algorithm": t.algorithm,
                    "success": t.success,
                    "length_m": t.length,
                    "runtime_s": t.runtime,
                    "error": t.error,
                }
                for t in report.tasks
            ],
            "geometric_failures": report.geometric_failures,
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown report format '{fmt}'")


def strip_runtime_columns(report_text: str) -> str:
    """CSV report with the runtime column removed (for determinism checks)."""
    lines = []
    for line in report_text.strip().splitlines():
        lines.append(line.rsplit(",", 1)[0])
    return "\n".join(lines) + "\n"


def load_maps_dir(directory: str | Path, cell_size: float = 0.2) -> dict[str, GridMap]:
    """All Moving AI maps in a directory, keyed by filename stem."""
    from .grid import load_movingai

    maps = {}
    for path in sorted(Path(directory).glob("*.map")):
        maps[path.stem] = load_movingai(path.read_text(), cell_size)
    return maps
