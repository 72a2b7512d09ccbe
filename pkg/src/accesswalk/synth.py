"""Synthetic networks for studies, demos, and verification.

Labels are stringified dense indices; grids get unit-spaced planar
coordinates so map export and the planner UI work out of the box.
"""
from __future__ import annotations

import math

from .network import StreetNetwork, build_network


def grid_network(rows: int, cols: int, spacing: float = 1.0) -> StreetNetwork:
    """rows x cols square lattice; node r*cols+c sits at (c, r) * spacing."""
    if rows < 1 or cols < 1:
        raise ValueError("grid needs at least one row and one column")
    labels = [str(r * cols + c) for r in range(rows) for c in range(cols)]
    coords = [(c * spacing, r * spacing) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((labels[i], labels[i + 1]))
            if r + 1 < rows:
                edges.append((labels[i], labels[i + cols]))
    return build_network(labels, edges, coords)


def path_network(n: int) -> StreetNetwork:
    labels = [str(i) for i in range(n)]
    coords = [(float(i), 0.0) for i in range(n)]
    return build_network(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)], coords)


def cycle_network(n: int) -> StreetNetwork:
    if n < 3:
        raise ValueError("cycle needs at least 3 nodes")
    labels = [str(i) for i in range(n)]
    coords = [
        (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)
    ]
    edges = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    return build_network(labels, edges, coords)


def star_network(leaves: int) -> StreetNetwork:
    """Center node '0' joined to ``leaves`` degree-one nodes."""
    if leaves < 1:
        raise ValueError("star needs at least one leaf")
    labels = [str(i) for i in range(leaves + 1)]
    coords = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * i / leaves), math.sin(2 * math.pi * i / leaves))
        for i in range(leaves)
    ]
    edges = [(labels[0], labels[i + 1]) for i in range(leaves)]
    return build_network(labels, edges, coords)


def grid_boundary_interior(rows: int, cols: int) -> tuple[frozenset[int], frozenset[int]]:
    """Dense ids of boundary and interior nodes of ``grid_network``."""
    boundary = set()
    interior = set()
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if r in (0, rows - 1) or c in (0, cols - 1):
                boundary.add(i)
            else:
                interior.add(i)
    return frozenset(boundary), frozenset(interior)
