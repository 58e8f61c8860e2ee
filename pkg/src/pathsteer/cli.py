"""Command-line interface.

Positions on the command line and in scenario files are in cells (floats),
angles in radians; everything is converted to meters internally using the
configured cell size.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bench import (
    generate_scenarios,
    load_maps_dir,
    read_scenarios,
    run_benchmark,
    write_report,
    write_scenarios,
)
from .config import PlannerSettings, load_settings
from .grid import distance_transform, dumps_movingai, load_movingai
from .maps import bundled_maps
from .planner import geometric_stage, plan_trajectory, smoothing_stage
from .render import render_svg
from .steering import State, Trajectory


def _pose_argument(text: str, cell_size: float) -> State:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("pose must be 'x,y,theta' (cells, radians)")
    x, y, theta = (float(p) for p in parts)
    return State(x * cell_size, y * cell_size, theta)


def _load_settings(args) -> PlannerSettings:
    if getattr(args, "config", None):
        return load_settings(args.config)
    return PlannerSettings()


def _plan_payload(args, settings, result, runtime, stage):
    payload = {
        "map": str(args.map),
        "algorithm": args.algo,
        "cell_size": settings.cell_size,
        "success": result is not None,
        "runtime_s": runtime,
    }
    if result is None:
        payload["failed_stage"] = stage
        return payload
    payload.update(
        {
            "length_m": result.trajectory.length,
            "geometric_path": [[s.x, s.y, s.theta] for s in result.geometric_path],
            "waypoints": [[s.x, s.y, s.theta] for s in result.waypoints],
            "extra_states": [[s.x, s.y, s.theta] for s in result.extra_states],
            "trajectory": {
                "dt": result.trajectory.dt,
                "length": result.trajectory.length,
                "states": result.trajectory.states.tolist(),
                "controls": result.trajectory.controls.tolist(),
            },
        }
    )
    return payload


def _cmd_plan(args) -> int:
    settings = _load_settings(args)
    grid = load_movingai(Path(args.map).read_text(), settings.cell_size)
    start = _pose_argument(args.start, settings.cell_size)
    goal = _pose_argument(args.goal, settings.cell_size)
    dmap = distance_transform(grid)
    try:
        path = geometric_stage(grid, dmap, start, goal, settings)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stage = None
    result = None
    runtime = 0.0
    if path is None:
        stage = "geometric"
    elif len(path) == 1:
        result = plan_trajectory(grid, start, goal, settings, dmap, args.algo)
    else:
        t0 = time.perf_counter()
        result = smoothing_stage(grid, dmap, path, settings, args.algo)
        runtime = time.perf_counter() - t0
        if result is None:
            stage = "smoothing"
    if args.json:
        Path(args.json).write_text(json.dumps(_plan_payload(args, settings, result, runtime, stage), indent=2))
    if args.svg:
        Path(args.svg).write_text(
            render_svg(
                grid,
                result.geometric_path if result else None,
                result.trajectory if result else None,
                result.extra_states if result else None,
            )
        )
    if result is None:
        print(f"FAILED ({args.algo}) at the {stage} stage in {runtime:.3f}s")
        return 1
    print(
        f"PLANNED ({args.algo}): length {result.trajectory.length:.2f} m, "
        f"{len(result.trajectory)} states, {len(result.waypoints)} waypoints, "
        f"{len(result.extra_states)} sampled, {runtime:.3f}s"
    )
    return 0


def _cmd_gen_scenarios(args) -> int:
    settings = _load_settings(args)
    grid = load_movingai(Path(args.map).read_text(), settings.cell_size)
    map_id = Path(args.map).stem
    min_clearance = args.min_clearance if args.min_clearance is not None else settings.min_clearance
    min_separation = (
        args.min_separation if args.min_separation is not None else settings.min_separation
    )
    try:
        scenarios = generate_scenarios(
            grid,
            args.n,
            min_clearance,
            args.seed,
            map_id=map_id,
            min_separation=min_separation,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    Path(args.out).write_text(write_scenarios(scenarios, settings.cell_size))
    print(f"wrote {len(scenarios)} scenarios for '{map_id}' to {args.out}")
    return 0


def _cmd_bench(args) -> int:
    settings = _load_settings(args)
    maps = load_maps_dir(args.maps, settings.cell_size)
    if not maps:
        print(f"error: no .map files in {args.maps}", file=sys.stderr)
        return 2
    scenarios = []
    for scen_file in sorted(Path(args.scenarios).glob("*.scen")):
        scenarios.extend(read_scenarios(scen_file.read_text(), settings.cell_size))
    if not scenarios:
        print(f"error: no .scen files in {args.scenarios}", file=sys.stderr)
        return 2
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    report = run_benchmark(maps, scenarios, algorithms, settings, jobs=args.jobs)
    out = Path(args.out)
    fmt = "json" if out.suffix.lower() == ".json" else "csv"
    out.write_text(write_report(report, fmt))
    if args.json and fmt != "json":
        Path(args.json).write_text(write_report(report, "json"))
    print(write_report(report, "csv"), end="")
    skipped = sum(report.geometric_failures.values())
    if skipped:
        print(f"(geometric planner failed {skipped} scenarios; excluded from all denominators)")
    return 0


def _cmd_plot(args) -> int:
    payload = json.loads(Path(args.result).read_text())
    cell_size = payload.get("cell_size", 0.2)
    grid = load_movingai(Path(args.map).read_text(), cell_size)
    path = [State(*p) for p in payload.get("geometric_path", [])]
    extra = [State(*p) for p in payload.get("extra_states", [])]
    trajectory = None
    if payload.get("trajectory"):
        data = payload["trajectory"]
        trajectory = Trajectory(data["states"], data["controls"], data["dt"])
    Path(args.out).write_text(render_svg(grid, path or None, trajectory, extra or None))
    print(f"wrote {args.out}")
    return 0


def _cmd_make_maps(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cell_size = args.cell_size
    for map_id, grid in bundled_maps(cell_size).items():
        target = out / f"{map_id}.map"
        target.write_text(dumps_movingai(grid))
        print(f"wrote {target} ({grid.width}x{grid.height})")
    # Companion config so gen-scenarios/bench interpret the maps at the
    # bundled scale and benchmark protocol.
    config = out / "pathsteer.cfg"
    config.write_text(
        f"cell_size = {cell_size}\nmin_clearance = 11\nmin_separation = 42\n"
    )
    print(f"wrote {config}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathsteer",
        description="Plan kinematically feasible car-like trajectories on grid maps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="plan a single trajectory")
    plan.add_argument("--map", required=True, help="Moving AI .map file")
    plan.add_argument("--start", required=True, help="x,y,theta (cells, radians)")
    plan.add_argument("--goal", required=True, help="x,y,theta (cells, radians)")
    plan.add_argument("--algo", default="grips-hs", choices=["grips", "grips-hs"])
    plan.add_argument("--svg", help="write a rendering here")
    plan.add_argument("--json", help="write the full result here")
    plan.add_argument("--config", help="key = value settings file")
    plan.set_defaults(func=_cmd_plan)

    gen = sub.add_parser("gen-scenarios", help="generate random planning tasks")
    gen.add_argument("--map", required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--min-clearance", type=float, default=None, help="cells (default from config, 20)")
    gen.add_argument("--min-separation", type=float, default=None, help="cells (default from config, 10)")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--config", help="key = value settings file")
    gen.set_defaults(func=_cmd_gen_scenarios)

    bench = sub.add_parser("bench", help="run a benchmark over scenario files")
    bench.add_argument("--maps", required=True, help="directory of .map files")
    bench.add_argument("--scenarios", required=True, help="directory of .scen files")
    bench.add_argument("--algos", default="grips,grips-hs")
    bench.add_argument("--out", required=True, help="report path (.csv or .json)")
    bench.add_argument("--json", help="also write a JSON report here")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--config", help="key = value settings file")
    bench.set_defaults(func=_cmd_bench)

    plot = sub.add_parser("plot", help="render a plan result to SVG")
    plot.add_argument("--map", required=True)
    plot.add_argument("--result", required=True, help="JSON written by 'plan --json'")
    plot.add_argument("--out", required=True)
    plot.set_defaults(func=_cmd_plot)

    make_maps = sub.add_parser("make-maps", help="write the bundled benchmark maps")
    make_maps.add_argument("--out", required=True)
    make_maps.add_argument("--cell-size", type=float, default=0.6)
    make_maps.set_defaults(func=_cmd_make_maps)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
