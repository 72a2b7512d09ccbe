"""Street network data model: ingestion, validation, topological queries.

Nodes carry arbitrary string labels in input files; the loader assigns
dense integer indices ``0..N-1`` (file order) and keeps the label table
for round-trips and exports. Adjacency is stored CSR-style (``indptr`` /
``indices``, neighbors sorted ascending) so the walk kernels can consume
it directly. Networks are immutable after construction and safe to share
across worker threads.
"""
from __future__ import annotations

import csv
import hashlib
import json
import warnings
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NetworkFormatError


@dataclass(frozen=True, eq=False)
class StreetNetwork:
    """Undirected simple graph with optional planar coordinates."""

    labels: tuple[str, ...]
    indptr: np.ndarray
    indices: np.ndarray
    coords: np.ndarray | None = None

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = (self.indptr[1:] - self.indptr[:-1]).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def _label_to_id(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def id_of(self, label: str) -> int:
        try:
            return self._label_to_id[label]
        except KeyError:
            raise NetworkFormatError(f"unknown node id {label!r}") from None

    def label_of(self, u: int) -> str:
        return self.labels[u]

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.node_count:
            raise NetworkFormatError(
                f"node index {u} out of range [0, {self.node_count})"
            )

    def degree(self, u: int) -> int:
        self._check_node(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        self._check_node(u)
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        row = self.neighbors(u)
        pos = np.searchsorted(row, v)
        return pos < len(row) and row[pos] == v

    def edge_list(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once, as (u, v) with u < v, sorted."""
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, int(v))

    def bfs_distance(self, u: int, v: int) -> int | None:
        """Minimum edge count on any u-v path; None if disconnected."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            return 0
        dist = {u: 0}
        queue = deque([u])
        while queue:
            cur = queue.popleft()
            d = dist[cur] + 1
            for w in self.neighbors(cur):
                w = int(w)
                if w not in dist:
                    if w == v:
                        return d
                    dist[w] = d
                    queue.append(w)
        return None

    def component_count(self) -> int:
        seen = np.zeros(self.node_count, dtype=bool)
        count = 0
        for start in range(self.node_count):
            if seen[start]:
                continue
            count += 1
            seen[start] = True
            queue = deque([start])
            while queue:
                cur = queue.popleft()
                for w in self.neighbors(cur):
                    if not seen[w]:
                        seen[w] = True
                        queue.append(int(w))
        return count

    def graph_hash(self) -> str:
        """sha256 over node count and the sorted dense edge list."""
        h = hashlib.sha256()
        h.update(f"{self.node_count}\n".encode())
        for u, v in self.edge_list():
            h.update(f"{u},{v}\n".encode())
        return h.hexdigest()


def neighborhood(net: StreetNetwork, centers: Iterable[int], radius: int) -> frozenset[int]:
    """All nodes within ``radius`` blocks (BFS edges) of any center.

    Centers themselves are included (distance 0).
    """
    centers = list(centers)
    if not centers:
        raise ValueError("centers set is empty")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    for c in centers:
        net._check_node(c)
    dist = {c: 0 for c in centers}
    queue = deque(dist)
    while queue:
        cur = queue.popleft()
        d = dist[cur]
        if d == radius:
            continue
        for w in net.neighbors(cur):
            w = int(w)
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return frozenset(dist)


def _build(
    nodes: Sequence[tuple[str, float | None, float | None, str]],
    edges: Sequence[tuple[str, str, str]],
) -> StreetNetwork:
    """Validate records and assemble the CSR network.

    Each record carries a context string (file/line) used verbatim in error
    messages. Duplicate nodes/edges and self-loops are rejected, never
    silently dropped.
    """
    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    coord_rows: list[tuple[float, float] | None] = []
    for label, x, y, ctx in nodes:
        if label in label_to_id:
            raise NetworkFormatError(f"{ctx}: duplicate node id {label!r}")
        label_to_id[label] = len(labels)
        labels.append(label)
        if (x is None) != (y is None):
            raise NetworkFormatError(f"{ctx}: node {label!r} has only one coordinate")
        coord_rows.append(None if x is None else (x, y))

    with_coords = sum(1 for c in coord_rows if c is not None)
    if 0 < with_coords < len(coord_rows):
        missing = next(labels[i] for i, c in enumerate(coord_rows) if c is None)
        raise NetworkFormatError(
            f"coordinates present for {with_coords}/{len(coord_rows)} nodes "
            f"(node {missing!r} lacks them); supply all or none"
        )

    n = len(labels)
    seen_edges: set[tuple[int, int]] = set()
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for su, sv, ctx in edges:
        if su not in label_to_id:
            raise NetworkFormatError(f"{ctx}: unknown node id {su!r}")
        if sv not in label_to_id:
            raise NetworkFormatError(f"{ctx}: unknown node id {sv!r}")
        u, v = label_to_id[su], label_to_id[sv]
        if u == v:
            raise NetworkFormatError(f"{ctx}: self-loop on node {su!r}")
        key = (min(u, v), max(u, v))
        if key in seen_edges:
            raise NetworkFormatError(f"{ctx}: duplicate edge ({su!r}, {sv!r})")
        seen_edges.add(key)
        adjacency[u].append(v)
        adjacency[v].append(u)

    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(adjacency[i])
    indices = np.zeros(int(indptr[-1]), dtype=np.int64)
    for i in range(n):
        indices[indptr[i]:indptr[i + 1]] = sorted(adjacency[i])

    coords = None
    if n and with_coords == n:
        coords = np.array(coord_rows, dtype=np.float64)

    net = StreetNetwork(labels=tuple(labels), indptr=indptr, indices=indices, coords=coords)
    if n and net.component_count() > 1:
        warnings.warn(
            f"network has {net.component_count()} connected components; "
            "walks never cross components",
            stacklevel=3,
        )
    return net


def build_network(
    labels: Sequence[str],
    edges: Iterable[tuple[str, str]],
    coords: Sequence[tuple[float, float] | None] | None = None,
) -> StreetNetwork:
    """Programmatic constructor (same validation as the file loaders)."""
    node_recs = []
    for i, lab in enumerate(labels):
        xy = coords[i] if coords is not None else None
        x, y = (xy if xy is not None else (None, None))
        node_recs.append((str(lab), x, y, f"node record {i}"))
    edge_recs = [(str(u), str(v), f"edge record {i}") for i, (u, v) in enumerate(edges)]
    return _build(node_recs, edge_recs)


def _parse_float(value: str, ctx: str, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise NetworkFormatError(f"{ctx}: column {column!r} is not a number: {value!r}") from None


def load_network(nodes_path: str | Path, edges_path: str | Path) -> StreetNetwork:
    """Load from a node CSV (header ``id[,x,y]``) and an edge CSV
    (header ``source,target``)."""
    nodes_path = Path(nodes_path)
    edges_path = Path(edges_path)

    node_recs: list[tuple[str, float | None, float | None, str]] = []
    with nodes_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "id" not in reader.fieldnames:
            raise NetworkFormatError(f"{nodes_path.name}: missing 'id' column header")
        has_xy = "x" in reader.fieldnames and "y" in reader.fieldnames
        for rec in reader:
            ctx = f"{nodes_path.name} line {reader.line_num}"
            label = (rec.get("id") or "").strip()
            if not label:
                raise NetworkFormatError(f"{ctx}: empty node id")
            x = y = None
            if has_xy and (rec.get("x") or "").strip():
                x = _parse_float(rec["x"].strip(), ctx, "x")
                y = _parse_float((rec.get("y") or "").strip(), ctx, "y")
            node_recs.append((label, x, y, ctx))

    edge_recs: list[tuple[str, str, str]] = []
    with edges_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"source", "target"} <= set(reader.fieldnames):
            raise NetworkFormatError(
                f"{edges_path.name}: header must contain 'source' and 'target'"
            )
        for rec in reader:
            ctx = f"{edges_path.name} line {reader.line_num}"
            u = (rec.get("source") or "").strip()
            v = (rec.get("target") or "").strip()
            if not u or not v:
                raise NetworkFormatError(f"{ctx}: empty endpoint")
            edge_recs.append((u, v, ctx))

    return _build(node_recs, edge_recs)


def load_network_json(path: str | Path) -> StreetNetwork:
    """Load the single-file JSON form:
    ``{"nodes": [{"id", "x", "y"}], "edges": [["u", "v"], ...]}``."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"{path.name}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
        raise NetworkFormatError(f"{path.name}: expected object with 'nodes' and 'edges'")

    node_recs = []
    for i, rec in enumerate(doc["nodes"]):
        ctx = f"{path.name} nodes[{i}]"
        if not isinstance(rec, dict) or "id" not in rec:
            raise NetworkFormatError(f"{ctx}: node entries need an 'id'")
        x = rec.get("x")
        y = rec.get("y")
        if x is not None:
            x = float(x)
        if y is not None:
            y = float(y)
        node_recs.append((str(rec["id"]), x, y, ctx))

    edge_recs = []
    for i, pair in enumerate(doc["edges"]):
        ctx = f"{path.name} edges[{i}]"
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise NetworkFormatError(f"{ctx}: edges must be [u, v] pairs")
        edge_recs.append((str(pair[0]), str(pair[1]), ctx))

    return _build(node_recs, edge_recs)


def network_to_json_obj(net: StreetNetwork) -> dict:
    nodes = []
    for i, lab in enumerate(net.labels):
        rec: dict = {"id": lab}
        if net.coords is not None:
            rec["x"] = float(net.coords[i, 0])
            rec["y"] = float(net.coords[i, 1])
        nodes.append(rec)
    edges = [[net.labels[u], net.labels[v]] for u, v in net.edge_list()]
    return {"nodes": nodes, "edges": edges}


def save_network_json(net: StreetNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(network_to_json_obj(net)), encoding="utf-8")


def geojson_nodes(
    net: StreetNetwork, properties: dict[int, dict] | None = None
) -> dict:
    """Point FeatureCollection; requires coordinates."""
    if net.coords is None:
        raise NetworkFormatError("network has no coordinates; cannot export GeoJSON")
    features = []
    for i, lab in enumerate(net.labels):
        props = {"id": lab}
        if properties and i in properties:
            props.update(properties[i])
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "Point",
                "coordinates": [float(net.coords[i, 0]), float(net.coords[i, 1])],
            },
            "properties": props,
        })
    return {"type": "FeatureCollection", "features": features}


def geojson_edges(net: StreetNetwork) -> dict:
    if net.coords is None:
        raise NetworkFormatError("network has no coordinates; cannot export GeoJSON")
    features = []
    for u, v in net.edge_list():
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [
                    [float(net.coords[u, 0]), float(net.coords[u, 1])],
                    [float(net.coords[v, 0]), float(net.coords[v, 1])],
                ],
            },
            "properties": {"source": net.labels[u], "target": net.labels[v]},
        })
    return {"type": "FeatureCollection", "features": features}
