"""What-if evaluation of added edges.

A scenario lists hypothetical new edges and a block radius. The affected
region is the radius-limited neighborhood of the added-edge endpoints,
computed on the baseline topology and reused for both curves so the
comparison averages like for like. Baseline and enhanced runs share the
master seed and per-source stream derivation (paired sampling), which
cuts comparison variance.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .accessibility import (
    AccessibilityField,
    field_from_walk_result,
    region_mean_curve,
)
from .errors import ScenarioError
from .network import StreetNetwork, build_network, neighborhood
from .walks import ProgressFn, WalkConfig, walk_entropy_field

DEFAULT_RADIUS = 7


@dataclass(frozen=True)
class Scenario:
    """Added edges as dense-id pairs (u < v), plus the region radius."""

    added_edges: tuple[tuple[int, int], ...]
    radius: int = DEFAULT_RADIUS


def make_scenario(
    net: StreetNetwork,
    edges: Iterable[tuple[str, str]],
    radius: int = DEFAULT_RADIUS,
) -> Scenario:
    """Validate label pairs against the network and build a Scenario."""
    if radius < 0:
        raise ScenarioError("radius must be >= 0")
    normalized: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for su, sv in edges:
        su, sv = str(su), str(sv)
        if su not in net._label_to_id:
            raise ScenarioError(f"unknown node id {su!r} in added edge ({su!r}, {sv!r})")
        if sv not in net._label_to_id:
            raise ScenarioError(f"unknown node id {sv!r} in added edge ({su!r}, {sv!r})")
        u, v = net.id_of(su), net.id_of(sv)
        if u == v:
            raise ScenarioError(f"added edge ({su!r}, {sv!r}) is a self-loop")
        key = (min(u, v), max(u, v))
        if net.has_edge(u, v):
            raise ScenarioError(f"added edge ({su!r}, {sv!r}) duplicates an existing edge")
        if key in seen:
            raise ScenarioError(f"added edge ({su!r}, {sv!r}) appears twice in the scenario")
        seen.add(key)
        normalized.append(key)
    if not normalized:
        raise ScenarioError("scenario adds no edges")
    return Scenario(added_edges=tuple(normalized), radius=radius)


def load_scenario(path: str | Path, net: StreetNetwork) -> Scenario:
    """Scenario file: ``{"add_edges": [["u","v"], ...], "radius": 7}``."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path.name}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "add_edges" not in doc:
        raise ScenarioError(f"{path.name}: expected an object with 'add_edges'")
    pairs = doc["add_edges"]
    if not isinstance(pairs, list) or any(
        not isinstance(p, (list, tuple)) or len(p) != 2 for p in pairs
    ):
        raise ScenarioError(f"{path.name}: 'add_edges' must be a list of [u, v] pairs")
    radius = doc.get("radius", DEFAULT_RADIUS)
    if not isinstance(radius, int) or isinstance(radius, bool):
        raise ScenarioError(f"{path.name}: 'radius' must be an integer")
    return make_scenario(net, [(str(u), str(v)) for u, v in pairs], radius=radius)


def apply_scenario(net: StreetNetwork, scenario: Scenario) -> StreetNetwork:
    """New immutable network = baseline plus the added edges."""
    _validate_against(net, scenario)
    edges = [(net.labels[u], net.labels[v]) for u, v in net.edge_list()]
    edges += [(net.labels[u], net.labels[v]) for u, v in scenario.added_edges]
    coords = None
    if net.coords is not None:
        coords = [(float(x), float(y)) for x, y in net.coords]
    return build_network(net.labels, edges, coords)


def _validate_against(net: StreetNetwork, scenario: Scenario) -> None:
    if not scenario.added_edges:
        raise ScenarioError("scenario adds no edges")
    seen = set()
    for u, v in scenario.added_edges:
        if not (0 <= u < net.node_count and 0 <= v < net.node_count):
            raise ScenarioError(f"added edge ({u}, {v}) references an unknown node")
        if u == v:
            raise ScenarioError(f"added edge ({u}, {v}) is a self-loop")
        if net.has_edge(u, v):
            raise ScenarioError(
                f"added edge ({net.labels[u]!r}, {net.labels[v]!r}) duplicates an existing edge"
            )
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ScenarioError(f"added edge ({u}, {v}) appears twice in the scenario")
        seen.add(key)


def affected_region(net: StreetNetwork, scenario: Scenario) -> frozenset[int]:
    """Nodes within ``radius`` blocks of any added-edge endpoint, on the
    baseline topology."""
    _validate_against(net, scenario)
    endpoints = {u for pair in scenario.added_edges for u in pair}
    return neighborhood(net, endpoints, scenario.radius)


@dataclass(frozen=True)
class ComparisonReport:
    """Baseline vs enhanced mean accessibility over the affected region."""

    region: tuple[int, ...]
    max_steps: int
    baseline_curve: np.ndarray = field(repr=False)
    enhanced_curve: np.ndarray = field(repr=False)
    relative_change: tuple[float | None, ...] = ()


def compare(
    baseline_field: AccessibilityField,
    enhanced_field: AccessibilityField,
    region: Iterable[int],
) -> ComparisonReport:
    """Per-step region means for both fields and their relative change
    (None where the baseline mean is zero)."""
    if baseline_field.max_steps != enhanced_field.max_steps:
        raise ValueError(
            f"mismatched max_steps: {baseline_field.max_steps} vs {enhanced_field.max_steps}"
        )
    if baseline_field.node_count_total != enhanced_field.node_count_total:
        raise ValueError("fields refer to different node counts")
    members = tuple(sorted(set(region)))
    if not members:
        raise ValueError("region is empty")
    base = region_mean_curve(baseline_field, members)
    enh = region_mean_curve(enhanced_field, members)
    rel = tuple(
        (float(e) - float(b)) / float(b) if b > 0.0 else None
        for b, e in zip(base, enh)
    )
    return ComparisonReport(
        region=members,
        max_steps=baseline_field.max_steps,
        baseline_curve=base,
        enhanced_curve=enh,
        relative_change=rel,
    )


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    region: frozenset[int]
    baseline_field: AccessibilityField
    enhanced_field: AccessibilityField
    report: ComparisonReport


def evaluate_scenario(
    net: StreetNetwork,
    scenario: Scenario,
    config: WalkConfig,
    threads: int = 1,
    full_recompute: bool = False,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
    progress: ProgressFn | None = None,
) -> ScenarioResult:
    """Run the paired baseline/enhanced estimation and build the report.

    By default only region sources are estimated: the report averages over
    the region and a node's accessibility depends only on walks from that
    node, so nothing else is needed. ``full_recompute`` covers every node
    (for full-field exports).
    """
    region = affected_region(net, scenario)
    enhanced_net = apply_scenario(net, scenario)
    run_sources = None if full_recompute else frozenset(region)
    run_config = replace(config, sources=run_sources)

    two_pass_total = 2 * len(
        run_sources if run_sources is not None else range(net.node_count)
    )

    def stage_progress(offset: int):
        if progress is None:
            return None

        def cb(done: int, total: int) -> None:
            progress(offset + done, two_pass_total)

        return cb

    base_result = walk_entropy_field(net, run_config, threads, stage_progress(0))
    enh_result = walk_entropy_field(
        enhanced_net, run_config, threads, stage_progress(two_pass_total // 2)
    )
    baseline_field = field_from_walk_result(
        base_result, net.node_count, literal_zero_survival, step_range
    )
    enhanced_field = field_from_walk_result(
        enh_result, enhanced_net.node_count, literal_zero_survival, step_range
    )
    report = compare(baseline_field, enhanced_field, region)
    return ScenarioResult(
        scenario=scenario,
        region=region,
        baseline_field=baseline_field,
        enhanced_field=enhanced_field,
        report=report,
    )


def report_to_json_obj(report: ComparisonReport, net: StreetNetwork, scenario: Scenario) -> dict:
    return {
        "added_edges": [[net.labels[u], net.labels[v]] for u, v in scenario.added_edges],
        "radius": scenario.radius,
        "region": [net.labels[u] for u in report.region],
        "steps": report.max_steps,
        "baseline_curve": [float(x) for x in report.baseline_curve],
        "enhanced_curve": [float(x) for x in report.enhanced_curve],
        "relative_change": [
            None if x is None else float(x) for x in report.relative_change
        ],
    }


def write_report_json(
    path: str | Path, report: ComparisonReport, net: StreetNetwork, scenario: Scenario
) -> None:
    Path(path).write_text(
        json.dumps(report_to_json_obj(report, net, scenario), indent=2) + "\n",
        encoding="utf-8",
    )


def write_report_csv(path: str | Path, report: ComparisonReport) -> None:
    """``h,baseline,enhanced,relative_change`` (empty cell where baseline
    mean is zero)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["h", "baseline", "enhanced", "relative_change"])
        for h in range(report.max_steps):
            rel = report.relative_change[h]
            writer.writerow([
                h + 1,
                repr(float(report.baseline_curve[h])),
                repr(float(report.enhanced_curve[h])),
                "" if rel is None else repr(float(rel)),
            ])
