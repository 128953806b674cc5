"""Synthetic test graphs: paths, 2-D grids, and random geometric graphs."""

from __future__ import annotations

import numpy as np

from .graph import Graph, is_connected

__all__ = ["path_graph", "grid_graph", "random_geometric_graph"]


def path_graph(n: int) -> Graph:
    """Path on n vertices: 0 - 1 - ... - (n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    """rows x cols lattice, vertex (r, c) numbered r * cols + c."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def random_geometric_graph(
    n: int,
    radius: float,
    rng: np.random.Generator,
    max_tries: int = 64,
) -> Graph:
    """Connected random geometric graph on the unit square.

    Vertices are uniform points; edges join pairs within ``radius``.
    Redraws the point set until connected (common for reasonable n / radius
    combinations), raising after ``max_tries`` failures.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if radius <= 0:
        raise ValueError("radius must be positive")
    for _ in range(max_tries):
        pts = rng.random((n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        iu, ju = np.triu_indices(n, k=1)
        close = dist2[iu, ju] <= radius * radius
        edges = list(zip(iu[close].tolist(), ju[close].tolist()))
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            return g
    raise ValueError(
        f"no connected geometric graph in {max_tries} tries "
        f"(n={n}, radius={radius}); increase the radius"
    )
