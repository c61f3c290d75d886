"""Command-line interface: scenario runs, scenario generation, area benchmark."""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .harness.bench import bench_affected_area, load_scan_corpus, make_scan_corpus, \
    save_scan_corpus
from .harness.config import default_config_yaml, load_config
from .harness.generate import generate_blockage_scenarios
from .harness.metrics import compute_metrics, metrics_to_csv, summary_to_csv
from .harness.runner import run_scenario
from .harness.scenario import load_scenarios, save_scenarios
from .harness.towns import packaged_path, resolve_town
from .ogm import export_map_pgm


def _cmd_run(args) -> int:
    from .harness import report

    world = resolve_town(args.town)
    scenario_path = Path(args.scenarios)
    if not scenario_path.exists():
        packaged = packaged_path("scenarios", scenario_path.name)
        if packaged.exists():
            scenario_path = packaged
        else:
            print(f"scenario file not found: {args.scenarios}", file=sys.stderr)
            return 2
    scenarios = load_scenarios(scenario_path)

    overrides: dict = {}
    if args.no_blockage_avoidance:
        overrides["avoidance_enabled"] = False
    if args.area_mode:
        overrides.setdefault("ogm", {})["area_mode"] = \
            "convex_hull" if args.area_mode == "hull" else "polygon"
    if args.wall_mode:
        overrides.setdefault("planner", {})["wall_mode"] = args.wall_mode
    config = load_config(args.config, overrides)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for sc in scenarios:
        if args.seed is not None:
            sc.seed = args.seed
        result = run_scenario(world, sc, config)
        rows.append(result.metrics)
        m = result.metrics
        print(f"{sc.id}: {'success' if m.success else 'FAIL'} "
              f"t={m.time_used:.1f}s/{m.deadline:.1f}s km={m.km_traveled:.3f} "
              f"collisions={m.static_collisions} replans={m.replans}")
        if args.export_ticks:
            (out / f"{sc.id}_ticks.csv").write_bytes(result.tick_log_bytes())
        if args.export_maps:
            report.save_scenario_figure(result, sc, out / f"{sc.id}_trajectory.png")
            (out / f"{sc.id}_ogm.pgm").write_bytes(export_map_pgm(result.grid))
            (out / f"{sc.id}_planning_map.pgm").write_bytes(
                report.planning_map_pgm(result.planner.pmap))
            report.save_planning_map_png(result.planner.pmap, result.planner.route,
                                         out / f"{sc.id}_planning_map.png")

    summary = compute_metrics(rows)
    (out / "metrics.csv").write_text(metrics_to_csv(rows))
    (out / "summary.csv").write_text(summary_to_csv(summary))
    report.save_summary_figure(rows, summary, out / "summary.png")
    print(f"\nsuccess rate: {summary['success_rate_pct']:.1f}%  "
          f"static collisions: {summary['km_per_static_collision_text']} km each  "
          f"mean detection range: {summary['mean_detection_range_m']:.1f} m")
    print(f"outputs in {out}")
    return 0


def _cmd_gen_scenarios(args) -> int:
    world = resolve_town(args.town)
    name = Path(args.town).stem if Path(args.town).exists() else args.town
    scenarios = generate_blockage_scenarios(world, args.n, args.seed, town_name=name)
    save_scenarios(scenarios, args.out)
    n_mand = sum(s.reroute_mandatory for s in scenarios)
    print(f"wrote {len(scenarios)} scenarios ({n_mand} reroute-mandatory) to {args.out}")
    return 0


def _cmd_gen_scans(args) -> int:
    world = resolve_town(args.town)
    config = load_config(args.config)
    scans, poses = make_scan_corpus(world, args.n, args.seed, config.lidar,
                                    config.filter_height, config.downsample)
    save_scan_corpus(scans, poses, args.out)
    print(f"wrote {len(scans)} scans to {args.out}")
    return 0


def _cmd_bench_area(args) -> int:
    from .harness import report as report_mod

    scans, poses = load_scan_corpus(args.scans)
    config = load_config(args.config)
    rep = bench_affected_area(scans, poses, repetitions=args.reps, params=config.ogm)
    for line in rep.summary_lines():
        print(line)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench_area.csv").write_text(rep.to_csv())
        report_mod.save_bench_figure(rep, out / "bench_area.png")
        print(f"outputs in {out}")
    return 0


def _cmd_print_config(args) -> int:
    print(default_config_yaml(), end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="gridnav",
                                     description="occupancy-grid navigation benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file against a town")
    p.add_argument("--town", required=True, help="town YAML or builtin name (town1, town2, loop)")
    p.add_argument("--scenarios", required=True, help="scenario YAML file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", default=None, help="config YAML overriding defaults")
    p.add_argument("--no-blockage-avoidance", action="store_true")
    p.add_argument("--area-mode", choices=["hull", "polygon"], default=None)
    p.add_argument("--wall-mode", choices=["directed", "removable"], default=None)
    p.add_argument("--seed", type=int, default=None, help="override scenario seeds")
    p.add_argument("--export-maps", action="store_true")
    p.add_argument("--export-ticks", action="store_true")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("gen-scenarios", help="generate blockage benchmark scenarios")
    p.add_argument("--town", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_scenarios)

    p = sub.add_parser("gen-scans", help="build a scan corpus for bench-area")
    p.add_argument("--town", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_scans)

    p = sub.add_parser("bench-area", help="hull vs polygon affected-area benchmark")
    p.add_argument("--scans", required=True, help="scan corpus .npz from gen-scans")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench_area)

    p = sub.add_parser("print-config", help="print the default config YAML")
    p.set_defaults(func=_cmd_print_config)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
