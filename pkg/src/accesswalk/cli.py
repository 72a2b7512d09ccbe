"""Command-line surface: compute, oracle, scenario, serve.

Defaults mirror the reference configuration (60 steps, 10000 walks per
source, radius 7). The seed has no default: reproducibility-sensitive
commands must state it. Exit codes: 0 ok, 1 invalid input, 2 internal
failure, 3 enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
import traceback
from pathlib import Path

from . import __version__
from .accessibility import (
    accessibility_geojson,
    field_from_walk_result,
    write_accessibility_csv,
)
from .errors import AccesswalkError, BudgetExceededError
from .manifest import write_manifest
from .network import (
    StreetNetwork,
    geojson_edges,
    geojson_nodes,
    load_network,
    load_network_json,
)
from .oracle import DEFAULT_BUDGET, exact_accessibility, exact_transitions, write_golden_dump
from .scenario import evaluate_scenario, load_scenario
from .walks import WalkConfig, walk_entropy_field

DEFAULT_STEPS = 60
DEFAULT_WALKS = 10_000


def _add_network_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", help="node CSV (header id[,x,y])")
    p.add_argument("--edges", help="edge CSV (header source,target)")
    p.add_argument("--network", help="single-file JSON network (alternative to CSV pair)")


def _load_net(args) -> tuple[StreetNetwork, list[Path]]:
    if args.network:
        if args.nodes or args.edges:
            raise AccesswalkError("use either --network or --nodes/--edges, not both")
        path = Path(args.network)
        return load_network_json(path), [path]
    if not (args.nodes and args.edges):
        raise AccesswalkError("supply --nodes and --edges, or --network")
    nodes, edges = Path(args.nodes), Path(args.edges)
    return load_network(nodes, edges), [nodes, edges]


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("ACCESSWALK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise AccesswalkError(f"ACCESSWALK_THREADS is not an integer: {env!r}")
    return max(1, os.cpu_count() or 1)


def _parse_step_range(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return (int(lo), int(hi))
    except ValueError:
        raise AccesswalkError(f"--step-range must look like A:B, got {text!r}")


def _progress_printer(quiet: bool):
    if quiet:
        return None
    state = {"t": 0.0}

    def cb(done: int, total: int) -> None:
        now = time.monotonic()
        if done == total or now - state["t"] >= 2.0:
            state["t"] = now
            print(f"progress: {done}/{total} sources", file=sys.stderr)

    return cb


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_compute(args) -> int:
    net, inputs = _load_net(args)
    if net.node_count < 2:
        raise AccesswalkError("network needs at least 2 nodes")
    config = WalkConfig(
        max_steps=args.steps, walks_per_source=args.walks, master_seed=args.seed
    )
    threads = _threads(args)
    step_range = _parse_step_range(args.step_range)
    out = _out_dir(args)
    outputs = ["accessibility.csv"]
    dump_path = None
    if args.dump_transitions:
        dump_path = out / "transitions.csv.gz"
        outputs.append(dump_path.name)

    t0 = time.monotonic()
    result = walk_entropy_field(
        net, config, threads, _progress_printer(args.quiet), dump_path
    )
    field = field_from_walk_result(
        result, net.node_count, args.literal_eq2, step_range
    )
    write_accessibility_csv(out / "accessibility.csv", net, field)
    if args.geojson:
        (out / "accessibility.geojson").write_text(
            json.dumps(accessibility_geojson(net, field)), encoding="utf-8"
        )
        network_doc = geojson_nodes(net)
        network_doc["features"].extend(geojson_edges(net)["features"])
        (out / "network.geojson").write_text(json.dumps(network_doc), encoding="utf-8")
        outputs += ["accessibility.geojson", "network.geojson"]
    duration = time.monotonic() - t0

    write_manifest(
        out,
        "compute",
        inputs,
        {
            "steps": args.steps,
            "walks": args.walks,
            "seed": args.seed,
            "threads": threads,
            "literal_eq2": args.literal_eq2,
            "step_range": list(field.step_range),
        },
        outputs,
        duration,
    )
    if not args.quiet:
        print(
            f"computed accessibility for {net.node_count} nodes in {duration:.1f}s",
            file=sys.stderr,
        )
    return 0


def cmd_oracle(args) -> int:
    net, inputs = _load_net(args)
    if net.node_count < 2:
        raise AccesswalkError("network needs at least 2 nodes")
    out = _out_dir(args)
    t0 = time.monotonic()
    transitions = [
        exact_transitions(net, src, args.max_steps, budget=args.budget)
        for src in range(net.node_count)
    ]
    write_golden_dump(out / "exact_transitions.csv.gz", net, transitions)
    field = exact_accessibility(net, args.max_steps, budget=args.budget)
    write_accessibility_csv(out / "exact_accessibility.csv", net, field)
    duration = time.monotonic() - t0
    write_manifest(
        out,
        "oracle",
        inputs,
        {"max_steps": args.max_steps, "budget": args.budget},
        ["exact_transitions.csv.gz", "exact_accessibility.csv"],
        duration,
    )
    return 0


def cmd_scenario(args) -> int:
    net, inputs = _load_net(args)
    if net.node_count < 2:
        raise AccesswalkError("network needs at least 2 nodes")
    scenario_path = Path(args.scenario)
    scenario = load_scenario(scenario_path, net)
    if args.radius is not None:
        if args.radius < 0:
            raise AccesswalkError("--radius must be >= 0")
        scenario = dataclasses.replace(scenario, radius=args.radius)
    config = WalkConfig(
        max_steps=args.steps, walks_per_source=args.walks, master_seed=args.seed
    )
    threads = _threads(args)
    out = _out_dir(args)

    t0 = time.monotonic()
    result = evaluate_scenario(
        net,
        scenario,
        config,
        threads=threads,
        full_recompute=args.full_recompute,
        literal_zero_survival=args.literal_eq2,
        step_range=_parse_step_range(args.step_range),
        progress=_progress_printer(args.quiet),
    )
    from .scenario import write_report_csv, write_report_json

    write_report_json(out / "report.json", result.report, net, scenario)
    write_report_csv(out / "report.csv", result.report)
    write_accessibility_csv(out / "baseline_accessibility.csv", net, result.baseline_field)
    write_accessibility_csv(out / "enhanced_accessibility.csv", net, result.enhanced_field)
    duration = time.monotonic() - t0

    write_manifest(
        out,
        "scenario",
        inputs + [scenario_path],
        {
            "steps": args.steps,
            "walks": args.walks,
            "seed": args.seed,
            "threads": threads,
            "radius": scenario.radius,
            "full_recompute": args.full_recompute,
        },
        [
            "report.json",
            "report.csv",
            "baseline_accessibility.csv",
            "enhanced_accessibility.csv",
        ],
        duration,
    )
    if not args.quiet:
        print(
            f"scenario evaluated over {len(result.report.region)} region nodes "
            f"in {duration:.1f}s",
            file=sys.stderr,
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    net, _inputs = _load_net(args)
    if net.node_count < 2:
        raise AccesswalkError("network needs at least 2 nodes")
    config = WalkConfig(
        max_steps=args.steps, walks_per_source=args.walks, master_seed=args.seed
    )
    app = create_app(
        net,
        config,
        threads=_threads(args),
        precompute=args.precompute,
        literal_zero_survival=args.literal_eq2,
        ui_dir=args.ui_dir,
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        raise AccesswalkError(f"server failed to start: {exc}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accesswalk",
        description="Self-avoiding-walk accessibility engine for street networks.",
    )
    parser.add_argument("--version", action="version", version=f"accesswalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="estimate accessibility for every node")
    _add_network_args(p)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="walk length S")
    p.add_argument("--walks", type=int, default=DEFAULT_WALKS, help="walks per source M")
    p.add_argument("--seed", type=int, required=True, help="master seed (no default)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (fallback: ACCESSWALK_THREADS, then CPU count)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--geojson", action="store_true", help="also write accessibility.geojson")
    p.add_argument("--dump-transitions", action="store_true",
                   help="write transitions.csv.gz (source,h,target,probability)")
    p.add_argument("--literal-eq2", action="store_true",
                   help="apply the accessibility formula literally at zero-survival steps")
    p.add_argument("--step-range", default=None,
                   help="steps used for the mean, as A:B (default: all)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("oracle", help="exact enumeration on a small graph")
    _add_network_args(p)
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="abort above this many enumerated partial paths")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scenario", help="evaluate added edges against the baseline")
    _add_network_args(p)
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--walks", type=int, default=DEFAULT_WALKS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--radius", type=int, default=None,
                   help="override the scenario file radius (file default: 7)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--full-recompute", action="store_true",
                   help="estimate every node, not just the affected region")
    p.add_argument("--literal-eq2", action="store_true")
    p.add_argument("--step-range", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("serve", help="run the HTTP service for the planner UI")
    _add_network_args(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--walks", type=int, default=DEFAULT_WALKS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--precompute", action="store_true",
                   help="compute baseline accessibility before accepting requests")
    p.add_argument("--literal-eq2", action="store_true")
    p.add_argument("--ui-dir", default=None, help="serve a built UI from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (AccesswalkError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
