"""Diversity entropy and outward accessibility.

The diversity entropy of a step-h transition distribution is the Shannon
entropy in nats, with zero-probability entries contributing exactly zero.
Outward accessibility normalizes it to [0, 1]: OA = exp(E) / (N - 1).

A step where no walk survives gets OA = 0 by definition here: applying
the formula literally to an empty distribution would credit exp(0)/(N-1)
to a node whose walks are all dead. The literal value stays available
behind ``literal_zero_survival`` for comparison.

Entropy terms always accumulate left-to-right over targets sorted by id,
so results are reproducible across runs, platforms and thread counts.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EstimationError
from .network import StreetNetwork, geojson_nodes
from .walks import TransitionEstimate, WalkFieldResult

MASS_TOLERANCE = 1e-9


def diversity_entropy(distribution: Mapping[int, float]) -> float:
    """Entropy in nats of a (possibly sub-normalized) sparse distribution.

    Raises EstimationError for probabilities outside [0, 1] or total mass
    above 1 + 1e-9; both signal an upstream estimation bug.
    """
    acc = 0.0
    total = 0.0
    for j in sorted(distribution):
        p = distribution[j]
        if p < 0.0 or p > 1.0 + MASS_TOLERANCE:
            raise EstimationError(f"probability {p!r} for target {j} outside [0, 1]")
        if p > 0.0:
            total += p
            acc += p * math.log(p)
    if total > 1.0 + MASS_TOLERANCE:
        raise EstimationError(f"distribution mass {total!r} exceeds 1")
    e = -acc
    return e if e > 0.0 else 0.0


def outward_accessibility(
    entropy: float,
    node_count: int,
    survival: float,
    literal_zero_survival: bool = False,
) -> float:
    """exp(entropy)/(N-1), or 0 when no walk is alive at this step."""
    if node_count < 2:
        raise ValueError("node_count must be >= 2")
    if entropy < 0.0:
        raise EstimationError(f"negative entropy {entropy!r}")
    if survival <= 0.0 and not literal_zero_survival:
        return 0.0
    return math.exp(entropy) / (node_count - 1)


@dataclass(frozen=True)
class AccessibilityField:
    """Per-node, per-step entropy and outward accessibility.

    Rows cover ``node_ids`` (ascending); a field may be partial when only
    a region was recomputed. ``mean_oa`` averages OA over the step range
    (default: every step 1..S, including zero-survival steps).
    """

    node_ids: tuple[int, ...]
    node_count_total: int
    max_steps: int
    entropy: np.ndarray = field(repr=False)
    survival: np.ndarray = field(repr=False)
    oa: np.ndarray = field(repr=False)
    mean_oa: np.ndarray = field(repr=False)
    step_range: tuple[int, int] = (1, 0)

    def row_of(self, node: int) -> int:
        pos = np.searchsorted(self.node_ids, node)
        if pos >= len(self.node_ids) or self.node_ids[pos] != node:
            raise KeyError(f"node {node} not covered by this field")
        return int(pos)

    def oa_of(self, node: int) -> np.ndarray:
        return self.oa[self.row_of(node)]

    def mean_oa_of(self, node: int) -> float:
        return float(self.mean_oa[self.row_of(node)])


def _resolve_step_range(step_range: tuple[int, int] | None, max_steps: int) -> tuple[int, int]:
    if step_range is None:
        return (1, max_steps)
    lo, hi = step_range
    if not 1 <= lo <= hi <= max_steps:
        raise ValueError(f"step range {step_range} not within [1, {max_steps}]")
    return (lo, hi)


def field_from_entropy(
    node_ids: Sequence[int],
    entropy: np.ndarray,
    survival: np.ndarray,
    node_count_total: int,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
) -> AccessibilityField:
    """Assemble a field from per-source entropy/survival rows."""
    if node_count_total < 2:
        raise ValueError("node_count_total must be >= 2")
    node_ids = tuple(node_ids)
    if any(node_ids[i] >= node_ids[i + 1] for i in range(len(node_ids) - 1)):
        raise ValueError("node_ids must be strictly ascending")
    max_steps = entropy.shape[1]
    oa = np.exp(entropy) / (node_count_total - 1)
    if not literal_zero_survival:
        oa = np.where(survival > 0.0, oa, 0.0)
    lo, hi = _resolve_step_range(step_range, max_steps)
    mean_oa = oa[:, lo - 1:hi].mean(axis=1)
    for arr in (entropy, survival, oa, mean_oa):
        arr.setflags(write=False)
    return AccessibilityField(
        node_ids=node_ids,
        node_count_total=node_count_total,
        max_steps=max_steps,
        entropy=entropy,
        survival=survival,
        oa=oa,
        mean_oa=mean_oa,
        step_range=(lo, hi),
    )


def accessibility_field(
    estimates: Iterable[TransitionEstimate],
    node_count_total: int,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
) -> AccessibilityField:
    """Build the field from sparse per-source estimates."""
    ests = sorted(estimates, key=lambda e: e.source)
    if not ests:
        raise ValueError("no estimates supplied")
    max_steps = ests[0].max_steps
    for e in ests:
        if e.max_steps != max_steps:
            raise ValueError(
                f"inconsistent max_steps: {e.max_steps} vs {max_steps} (source {e.source})"
            )
    entropy = np.zeros((len(ests), max_steps), dtype=np.float64)
    survival = np.zeros((len(ests), max_steps), dtype=np.float64)
    for i, est in enumerate(ests):
        for h in range(max_steps):
            entropy[i, h] = diversity_entropy(est.per_step[h])
        survival[i] = est.survival
    return field_from_entropy(
        [e.source for e in ests],
        entropy,
        survival,
        node_count_total,
        literal_zero_survival,
        step_range,
    )


def field_from_walk_result(
    result: WalkFieldResult,
    node_count_total: int,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
) -> AccessibilityField:
    return field_from_entropy(
        result.sources,
        result.entropy.copy(),
        result.survival.copy(),
        node_count_total,
        literal_zero_survival,
        step_range,
    )


def region_mean_curve(field: AccessibilityField, region: Iterable[int]) -> np.ndarray:
    """Arithmetic mean of OA_h over the region, per step."""
    members = sorted(set(region))
    if not members:
        raise ValueError("region is empty")
    rows = [field.row_of(u) for u in members]
    return field.oa[rows].mean(axis=0)


def write_accessibility_csv(
    path: str | Path, net: StreetNetwork, field: AccessibilityField
) -> None:
    """``node_id,mean_oa,oa_1,...,oa_S`` with original node labels."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["node_id", "mean_oa"] + [f"oa_{h}" for h in range(1, field.max_steps + 1)]
        )
        for i, node in enumerate(field.node_ids):
            writer.writerow(
                [net.labels[node], repr(float(field.mean_oa[i]))]
                + [repr(float(x)) for x in field.oa[i]]
            )


def accessibility_geojson(net: StreetNetwork, field: AccessibilityField) -> dict:
    """Node Point features carrying ``mean_oa`` for choropleth rendering."""
    props = {
        int(node): {"mean_oa": float(field.mean_oa[i])}
        for i, node in enumerate(field.node_ids)
    }
    return geojson_nodes(net, properties=props)
