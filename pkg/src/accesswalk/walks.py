"""Self-avoiding-walk sampling and Monte Carlo transition estimation.

Transition probabilities are estimated per source: M independent walks,
each contributing its position at every step it reached; counts divided
by M. A walk that ends at step h' contributes to steps 1..h' and nothing
later, so the per-step mass (survival) is non-increasing.

Per-source RNG streams derive from (master_seed, source id), making
``estimate_all`` embarrassingly parallel with results independent of
worker count and scheduling.
"""
from __future__ import annotations

import csv
import gzip
import io
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernel
from .network import StreetNetwork
from .rng import WalkRng

MAX_STEPS_TAG = "max_steps"
EXTREMITY_TAG = "extremity"
TRAPPED_TAG = "trapped"

ProgressFn = Callable[[int, int], None]


@dataclass(frozen=True)
class WalkConfig:
    """Monte Carlo parameters. ``sources=None`` means every node."""

    max_steps: int
    walks_per_source: int
    master_seed: int
    sources: frozenset[int] | None = None

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.walks_per_source < 1:
            raise ValueError("walks_per_source must be >= 1")
        if self.walks_per_source >= 2**31:
            raise ValueError("walks_per_source must fit in 32 bits")


@dataclass(frozen=True)
class WalkPath:
    """One sampled walk: visited nodes (first = source) plus why it ended."""

    nodes: tuple[int, ...]
    termination: str

    @property
    def steps(self) -> int:
        return len(self.nodes) - 1


@dataclass(frozen=True)
class TransitionEstimate:
    """Estimated P_h(source, j) for h in [1, max_steps], stored sparsely.

    ``per_step[h-1]`` maps target id to probability (a multiple of
    1/walks); ``survival[h-1]`` is the total mass still alive at step h.
    """

    source: int
    max_steps: int
    walks: int
    per_step: tuple[dict[int, float], ...]
    survival: np.ndarray = field(repr=False)

    def probabilities(self, h: int) -> dict[int, float]:
        if not 1 <= h <= self.max_steps:
            raise ValueError(f"step {h} outside [1, {self.max_steps}]")
        return self.per_step[h - 1]


def sample_walk(
    net: StreetNetwork, source: int, max_steps: int, rng: WalkRng
) -> WalkPath:
    """Sample one self-avoiding walk.

    On arrival at a node after h steps the walk stops if the node is an
    extremity (degree one), else if h reached ``max_steps``, else if all
    neighbors were visited (trapped); otherwise it moves to a uniformly
    random unvisited neighbor. A degree-0 source yields the single-node
    path, tagged trapped.
    """
    net._check_node(source)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    path = [source]
    visited = {source}
    degrees = net.degrees
    v = source
    h = 0
    while True:
        if h >= 1 and degrees[v] == 1:
            return WalkPath(tuple(path), EXTREMITY_TAG)
        if h == max_steps:
            return WalkPath(tuple(path), MAX_STEPS_TAG)
        candidates = [int(w) for w in net.neighbors(v) if w not in visited]
        if not candidates:
            return WalkPath(tuple(path), TRAPPED_TAG)
        v = candidates[rng.next_below(len(candidates))]
        h += 1
        path.append(v)
        visited.add(v)


def _counts_to_estimate(
    counts: np.ndarray, source: int, walks: int
) -> TransitionEstimate:
    max_steps = counts.shape[0]
    per_step = []
    survival = np.zeros(max_steps, dtype=np.float64)
    for h in range(max_steps):
        row = counts[h]
        nz = np.nonzero(row)[0]
        per_step.append({int(j): int(row[j]) / walks for j in nz})
        survival[h] = int(row.sum()) / walks
    return TransitionEstimate(
        source=source,
        max_steps=max_steps,
        walks=walks,
        per_step=tuple(per_step),
        survival=survival,
    )


def estimate_transitions(
    net: StreetNetwork, source: int, config: WalkConfig
) -> TransitionEstimate:
    """Run exactly ``walks_per_source`` walks from ``source`` and count."""
    net._check_node(source)
    counts = _kernel.walk_counts_for_source(
        net.indptr,
        net.indices,
        net.degrees,
        source,
        config.max_steps,
        config.walks_per_source,
        config.master_seed,
    )
    return _counts_to_estimate(counts, source, config.walks_per_source)


def resolve_sources(net: StreetNetwork, config: WalkConfig) -> list[int]:
    if config.sources is None:
        return list(range(net.node_count))
    sources = sorted(config.sources)
    for s in sources:
        net._check_node(s)
    return sources


def estimate_all(
    net: StreetNetwork,
    config: WalkConfig,
    threads: int = 1,
    progress: ProgressFn | None = None,
) -> list[TransitionEstimate]:
    """Independent per-source estimates, ordered by source id.

    Keeps every sparse distribution in memory; fine up to a few hundred
    sources. City-scale accessibility should go through
    ``walk_entropy_field`` instead, which reduces each source on the fly.
    """
    sources = resolve_sources(net, config)
    results: list[TransitionEstimate | None] = [None] * len(sources)

    def job(idx: int) -> None:
        results[idx] = estimate_transitions(net, sources[idx], config)

    _run_jobs(len(sources), job, threads, progress)
    return [r for r in results if r is not None]


@dataclass(frozen=True)
class WalkFieldResult:
    """Per-source entropy/survival rows from a fused estimation pass."""

    sources: tuple[int, ...]
    max_steps: int
    walks: int
    entropy: np.ndarray
    survival: np.ndarray


def _run_jobs(
    total: int,
    job: Callable[[int], None],
    threads: int,
    progress: ProgressFn | None,
) -> None:
    threads = max(1, threads)
    if threads == 1 or total <= 1:
        for i in range(total):
            job(i)
            if progress:
                progress(i + 1, total)
        return
    _kernel.warmup()
    done = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(job, i) for i in range(total)]
        for fut in as_completed(futures):
            fut.result()
            done += 1
            if progress:
                progress(done, total)


def walk_entropy_field(
    net: StreetNetwork,
    config: WalkConfig,
    threads: int = 1,
    progress: ProgressFn | None = None,
    dump_path: str | Path | None = None,
) -> WalkFieldResult:
    """Estimate all requested sources, reducing each to per-step entropy
    and survival without keeping distributions (the scalable path).

    With ``dump_path`` the sparse nonzero probabilities are also written as
    a gzip CSV ``source,h,target,probability``, rows ordered by source id.
    """
    sources = resolve_sources(net, config)
    n = len(sources)
    entropy = np.zeros((n, config.max_steps), dtype=np.float64)
    survival = np.zeros((n, config.max_steps), dtype=np.float64)
    dump_rows: list[list[tuple[int, int, float]] | None] = [None] * n if dump_path else []

    def job(idx: int) -> None:
        src = sources[idx]
        if dump_path is None:
            e_row, s_row = _kernel.walk_stats_for_source(
                net.indptr,
                net.indices,
                net.degrees,
                src,
                config.max_steps,
                config.walks_per_source,
                config.master_seed,
            )
            entropy[idx] = e_row
            survival[idx] = s_row
        else:
            counts = _kernel.walk_counts_for_source(
                net.indptr,
                net.indices,
                net.degrees,
                src,
                config.max_steps,
                config.walks_per_source,
                config.master_seed,
            )
            e_row, s_row = _kernel.reduce_counts(counts, config.walks_per_source)
            entropy[idx] = e_row
            survival[idx] = s_row
            rows = []
            for h in range(config.max_steps):
                nz = np.nonzero(counts[h])[0]
                for j in nz:
                    rows.append((h + 1, int(j), int(counts[h, j]) / config.walks_per_source))
            dump_rows[idx] = rows

    _run_jobs(n, job, threads, progress)

    if dump_path is not None:
        write_transition_dump(
            dump_path,
            net,
            ((sources[i], dump_rows[i] or []) for i in range(n)),
        )

    return WalkFieldResult(
        sources=tuple(sources),
        max_steps=config.max_steps,
        walks=config.walks_per_source,
        entropy=entropy,
        survival=survival,
    )


@contextmanager
def _open_deterministic_gzip(path: str | Path):
    # mtime=0 keeps the gzip container byte-stable across runs.
    with open(path, "wb") as raw:
        gz = gzip.GzipFile(filename="", mode="wb", fileobj=raw, mtime=0)
        with io.TextIOWrapper(gz, encoding="utf-8", newline="") as text:
            yield text


def write_transition_dump(
    path: str | Path,
    net: StreetNetwork,
    per_source_rows: Iterable[tuple[int, Sequence[tuple[int, int, float]]]],
    header_comment: str | None = None,
) -> None:
    """Write the ``source,h,target,probability`` dump (gzip CSV)."""
    with _open_deterministic_gzip(path) as fh:
        if header_comment is not None:
            fh.write(f"# {header_comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source", "h", "target", "probability"])
        for source, rows in per_source_rows:
            src_label = net.labels[source]
            for h, target, p in rows:
                writer.writerow([src_label, h, net.labels[target], repr(p)])


def read_transition_dump(
    path: str | Path,
) -> tuple[str | None, list[tuple[str, int, str, float]]]:
    """Read a dump back: (header comment or None, rows)."""
    with gzip.open(path, "rt", encoding="utf-8", newline="") as fh:
        first = fh.readline()
        comment = None
        if first.startswith("#"):
            comment = first[1:].strip()
            first = fh.readline()
        rows = []
        for rec in csv.reader(fh.read().splitlines()):
            rows.append((rec[0], int(rec[1]), rec[2], float(rec[3])))
        return comment, rows
