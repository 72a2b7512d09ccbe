"""Exact transition probabilities by exhaustive self-avoiding-path
enumeration. This is the verification oracle for the Monte Carlo engine
on small graphs; enumeration cost is exponential, so a partial-path
budget guards against runaway inputs.

Each enumerated path carries probability = product of 1/(unvisited
neighbor count) at every choice point, under the same termination rules
as the sampler. P_h(source, j) sums the probabilities of paths whose
step-h position is j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .accessibility import AccessibilityField, diversity_entropy, field_from_entropy
from .errors import BudgetExceededError
from .network import StreetNetwork
from .walks import write_transition_dump

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class ExactTransition:
    """Exact counterpart of TransitionEstimate (same invariants)."""

    source: int
    max_steps: int
    per_step: tuple[dict[int, float], ...]
    survival: np.ndarray = field(repr=False)

    def probabilities(self, h: int) -> dict[int, float]:
        if not 1 <= h <= self.max_steps:
            raise ValueError(f"step {h} outside [1, {self.max_steps}]")
        return self.per_step[h - 1]


def exact_transitions(
    net: StreetNetwork,
    source: int,
    max_steps: int,
    budget: int = DEFAULT_BUDGET,
    arithmetic: str = "float",
) -> ExactTransition:
    """Depth-first enumeration of every self-avoiding path from ``source``.

    ``arithmetic="rational"`` accumulates exact Fractions (intended for
    tiny graphs; it cross-checks the float mode in tests). The budget
    counts expanded partial paths; exceeding it raises
    BudgetExceededError.
    """
    net._check_node(source)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if arithmetic not in ("float", "rational"):
        raise ValueError(f"unknown arithmetic {arithmetic!r}")
    rational = arithmetic == "rational"

    degrees = net.degrees
    zero = Fraction(0) if rational else 0.0
    one = Fraction(1) if rational else 1.0
    acc: list[dict[int, object]] = [{} for _ in range(max_steps)]

    visited = np.zeros(net.node_count, dtype=bool)
    visited[source] = True
    # Frame: node, arrival step, arrival probability, candidate list, cursor.
    stack: list[list] = []
    expanded = 0

    def candidates_of(v: int, h: int) -> list[int] | None:
        """None when the walk terminates on arrival at v."""
        if h >= 1 and degrees[v] == 1:
            return None
        if h == max_steps:
            return None
        cands = [int(w) for w in net.neighbors(v) if not visited[w]]
        return cands or None

    root_cands = candidates_of(source, 0)
    if root_cands:
        stack.append([source, 0, one, root_cands, 0])

    while stack:
        frame = stack[-1]
        v, h, q, cands, cursor = frame
        if cursor == len(cands):
            stack.pop()
            if h > 0:
                visited[v] = False
            continue
        frame[4] += 1
        w = cands[cursor]
        expanded += 1
        if expanded > budget:
            raise BudgetExceededError(
                f"exact enumeration exceeded budget of {budget} partial paths"
            )
        qw = q / len(cands)
        hw = h + 1
        prev = acc[hw - 1].get(w, zero)
        acc[hw - 1][w] = prev + qw
        visited[w] = True
        child_cands = candidates_of(w, hw)
        if child_cands is None:
            visited[w] = False
        else:
            stack.append([w, hw, qw, child_cands, 0])

    per_step: list[dict[int, float]] = []
    survival = np.zeros(max_steps, dtype=np.float64)
    for h in range(max_steps):
        dist = {j: float(acc[h][j]) for j in sorted(acc[h])}
        per_step.append(dist)
        total = 0.0
        for j in sorted(dist):
            total += dist[j]
        survival[h] = total
    return ExactTransition(
        source=source,
        max_steps=max_steps,
        per_step=tuple(per_step),
        survival=survival,
    )


def exact_accessibility(
    net: StreetNetwork,
    max_steps: int,
    budget: int = DEFAULT_BUDGET,
    sources: Sequence[int] | None = None,
    literal_zero_survival: bool = False,
    step_range: tuple[int, int] | None = None,
) -> AccessibilityField:
    """Exact accessibility field (deterministic, seed-free)."""
    node_ids = sorted(sources) if sources is not None else list(range(net.node_count))
    entropy = np.zeros((len(node_ids), max_steps), dtype=np.float64)
    survival = np.zeros((len(node_ids), max_steps), dtype=np.float64)
    for i, src in enumerate(node_ids):
        tr = exact_transitions(net, src, max_steps, budget=budget)
        for h in range(max_steps):
            entropy[i, h] = diversity_entropy(tr.per_step[h])
        survival[i] = tr.survival
    return field_from_entropy(
        node_ids,
        entropy,
        survival,
        net.node_count,
        literal_zero_survival,
        step_range,
    )


def write_golden_dump(
    path: str | Path, net: StreetNetwork, transitions: Sequence[ExactTransition]
) -> None:
    """Same tabular format as the Monte Carlo dump, with a header line
    recording the graph hash and max_steps."""
    if not transitions:
        raise ValueError("no transitions to write")
    max_steps = transitions[0].max_steps
    header = f"graph_hash={net.graph_hash()} max_steps={max_steps}"
    per_source = []
    for tr in sorted(transitions, key=lambda t: t.source):
        rows = []
        for h in range(1, tr.max_steps + 1):
            for j, p in tr.per_step[h - 1].items():
                rows.append((h, j, p))
        per_source.append((tr.source, rows))
    write_transition_dump(path, net, per_source, header_comment=header)
