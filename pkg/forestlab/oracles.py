"""
oracles.py - Exact spanning-tree oracles for small graphs

spanning_tree_count evaluates the matrix-tree determinant in exact integer
arithmetic (Bareiss fraction-free elimination), so counts are big integers
rather than rounded floats. enumerate_spanning_trees lists every tree as a
sorted edge-id tuple, in lexicographic order.
"""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import ResourceError
from .graph import Graph
from .unionfind import DisjointSet

log = logging.getLogger(__name__)


def _bareiss_determinant(matrix: list[list[int]]) -> int:
    a = [row[:] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def spanning_tree_count(graph: Graph, *, settings: Settings = DEFAULT_SETTINGS) -> int:
    """Number of spanning trees (parallel edges counted with multiplicity); 0 if disconnected."""
    n = graph.vertex_count
    if n > settings.exact_count_cap:
        raise ResourceError("exact count vertex", n, settings.exact_count_cap)
    if n <= 1:
        return 1
    lap = graph.laplacian().toarray().round().astype(np.int64)
    reduced = lap[1:, 1:].tolist()
    return _bareiss_determinant(reduced)


def iter_spanning_trees(graph: Graph, *, settings: Settings = DEFAULT_SETTINGS) -> Iterator[tuple[int, ...]]:
    """Spanning trees as sorted edge-id tuples, lexicographically increasing."""
    m, n = graph.edge_count, graph.vertex_count
    if m > settings.enumeration_edge_cap:
        raise ResourceError("enumeration edge", m, settings.enumeration_edge_cap)
    need = n - 1
    if n <= 1:
        yield ()
        return
    edges = graph.edges.tolist()
    chosen: list[int] = []

    def extend(start: int, forest: DisjointSet) -> Iterator[tuple[int, ...]]:
        missing = need - len(chosen)
        if missing == 0:
            yield tuple(chosen)
            return
        for e in range(start, m - missing + 1):
            u, v = edges[e]
            if forest.find(u) == forest.find(v):
                continue
            grown = forest.copy()
            grown.merge(u, v)
            chosen.append(e)
            yield from extend(e + 1, grown)
            chosen.pop()

    yield from extend(0, DisjointSet(n))


def enumerate_spanning_trees(graph: Graph, *, settings: Settings = DEFAULT_SETTINGS) -> list[tuple[int, ...]]:
    trees = list(iter_spanning_trees(graph, settings=settings))
    log.debug("enumerated %d spanning trees on %d edges", len(trees), graph.edge_count)
    return trees


def tree_probabilities(graph: Graph, *, settings: Settings = DEFAULT_SETTINGS) -> dict[tuple[int, ...], float]:
    """Uniform law over the enumerated spanning trees."""
    trees = enumerate_spanning_trees(graph, settings=settings)
    return {t: 1.0 / len(trees) for t in trees}
