"""
graph.py - Immutable undirected multigraphs and component labelling

Vertices are dense integers 0..n-1. Edges carry ids (their position in
`edges`); parallel edges are distinct ids and each counts as a unit
conductance. An optional `wired_vertex` marks the vertex that stands for the
identified exterior of a box.

Edge-list text format (used by the CLI for user graphs):
    n m [wired_id]
    u v        (m lines, 0-based, parallel edges repeat)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np
import scipy.sparse as sps
from scipy.sparse.csgraph import connected_components

from .errors import ContractViolation

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_count: int
    edges: np.ndarray
    wired_vertex: int | None = None
    _csr: tuple = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        n = int(self.vertex_count)
        if n < 0:
            raise ContractViolation("vertex_count must be nonnegative")
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise ContractViolation(f"edge endpoint outside 0..{n - 1}")
        if len(edges) and np.any(edges[:, 0] == edges[:, 1]):
            raise ContractViolation("self-loops are not supported")
        if self.wired_vertex is not None and not 0 <= self.wired_vertex < n:
            raise ContractViolation(f"wired_vertex {self.wired_vertex} is not a vertex")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "vertex_count", n)

        # CSR adjacency: both orientations of every edge
        m = len(edges)
        heads = np.concatenate([edges[:, 0], edges[:, 1]])
        tails = np.concatenate([edges[:, 1], edges[:, 0]])
        ids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(heads, kind="stable")
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.add.at(offsets, heads + 1, 1)
        np.cumsum(offsets, out=offsets)
        object.__setattr__(self, "_csr", (offsets, tails[order], ids[order]))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]], wired_vertex: int | None = None) -> Graph:
        arr = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(vertex_count, arr, wired_vertex)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        offsets = self._csr[0]
        return np.diff(offsets)

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, edge ids) incident to v, multi-edges repeated."""
        offsets, nbrs, eids = self._csr
        lo, hi = offsets[v], offsets[v + 1]
        return nbrs[lo:hi], eids[lo:hi]

    def adjacency_lists(self, edge_mask: np.ndarray | None = None) -> tuple[list[list[int]], list[list[int]]]:
        """Python adjacency for walk loops, optionally restricted to masked edges."""
        if edge_mask is None:
            return self._full_adjacency
        return self._build_adjacency(np.asarray(edge_mask, dtype=bool))

    @cached_property
    def _full_adjacency(self) -> tuple[list[list[int]], list[list[int]]]:
        return self._build_adjacency(None)

    def _build_adjacency(self, mask: np.ndarray | None):
        offsets, nbrs, eids = self._csr
        if mask is not None:
            keep = mask[eids]
        bounds = offsets.tolist()
        nbr_list = nbrs.tolist()
        eid_list = eids.tolist()
        adj: list[list[int]] = []
        inc: list[list[int]] = []
        for v in range(self.vertex_count):
            lo, hi = bounds[v], bounds[v + 1]
            if mask is None:
                adj.append(nbr_list[lo:hi])
                inc.append(eid_list[lo:hi])
            else:
                sel = [i for i in range(lo, hi) if keep[i]]
                adj.append([nbr_list[i] for i in sel])
                inc.append([eid_list[i] for i in sel])
        return adj, inc

    def edge_between(self, u: int, v: int) -> int:
        """Smallest edge id joining u and v; ContractViolation if they are not adjacent."""
        nbrs, eids = self.neighbors(u)
        hits = eids[nbrs == v]
        if len(hits) == 0:
            raise ContractViolation(f"vertices {u} and {v} are not adjacent")
        return int(hits.min())

    def adjacency_matrix(self, edge_mask: np.ndarray | None = None) -> sps.csr_matrix:
        """Symmetric sparse adjacency; parallel edges add up."""
        edges = self.edges if edge_mask is None else self.edges[np.asarray(edge_mask, dtype=bool)]
        n = self.vertex_count
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(len(rows))
        return sps.csr_matrix((data, (rows, cols)), shape=(n, n))

    def laplacian(self, edge_mask: np.ndarray | None = None) -> sps.csr_matrix:
        adj = self.adjacency_matrix(edge_mask)
        deg = np.asarray(adj.sum(axis=1)).ravel()
        return (sps.diags(deg) - adj).tocsr()

    def without_vertex_edges(self, v: int) -> np.ndarray:
        """Edge mask of the edges not incident to v."""
        return (self.edges[:, 0] != v) & (self.edges[:, 1] != v)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> Graph:
        extra = np.array(list(extra), dtype=np.int64).reshape(-1, 2)
        return Graph(self.vertex_count, np.vstack([self.edges, extra]), self.wired_vertex)

    def without_edges(self, edge_ids: Iterable[int]) -> Graph:
        keep = np.ones(self.edge_count, dtype=bool)
        keep[list(edge_ids)] = False
        return Graph(self.vertex_count, self.edges[keep], self.wired_vertex)


@dataclass(frozen=True, eq=False)
class ComponentMap:
    """Per-vertex component ids; -1 marks vertices outside the labelled set."""

    labels: np.ndarray
    component_count: int

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)

    def same(self, u: int, v: int) -> bool:
        return self.labels[u] >= 0 and self.labels[u] == self.labels[v]

    def partition(self) -> frozenset[frozenset[int]]:
        """Labels forgotten: the vertex partition only."""
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(self.labels.tolist()):
            if lab >= 0:
                groups.setdefault(lab, []).append(v)
        return frozenset(frozenset(g) for g in groups.values())

    def sizes(self) -> np.ndarray:
        valid = self.labels[self.labels >= 0]
        return np.bincount(valid, minlength=self.component_count)


def components(graph: Graph, edge_mask: np.ndarray | None = None, vertices: np.ndarray | None = None) -> ComponentMap:
    """
    Connected components under the masked edges.

    Components are numbered 0, 1, ... in order of their smallest vertex id.
    If `vertices` (boolean mask) is given, other vertices get label -1 and
    masked edges touching them are ignored.
    """
    n = graph.vertex_count
    mask = np.ones(graph.edge_count, dtype=bool) if edge_mask is None else np.asarray(edge_mask, dtype=bool).copy()
    if len(mask) != graph.edge_count:
        raise ContractViolation(f"edge mask has {len(mask)} entries, graph has {graph.edge_count} edges")
    if vertices is not None:
        vertices = np.asarray(vertices, dtype=bool)
        mask &= vertices[graph.edges[:, 0]] & vertices[graph.edges[:, 1]]
    if n == 0:
        return ComponentMap(np.zeros(0, dtype=np.int64), 0)
    _, raw = connected_components(graph.adjacency_matrix(mask), directed=False)
    if vertices is not None:
        raw = np.where(vertices, raw, -1)
    labels = np.full(n, -1, dtype=np.int64)
    valid = raw >= 0
    uniq, first = np.unique(raw[valid], return_index=True)
    # first occurrence in vertex order == smallest contained vertex
    order = np.argsort(np.flatnonzero(valid)[first], kind="stable")
    remap = np.empty(len(uniq), dtype=np.int64)
    remap[order] = np.arange(len(uniq))
    labels[valid] = remap[np.searchsorted(uniq, raw[valid])]
    return ComponentMap(labels, len(uniq))


def is_connected(graph: Graph, edge_mask: np.ndarray | None = None) -> bool:
    return graph.vertex_count <= 1 or components(graph, edge_mask).component_count == 1


def read_edge_list(path: str | Path) -> Graph:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ContractViolation(f"{path}: empty edge-list file")
    header = lines[0]
    if len(header) not in (2, 3):
        raise ContractViolation(f"{path}: header must be 'n m [wired_id]'")
    try:
        n, m = int(header[0]), int(header[1])
        wired = int(header[2]) if len(header) == 3 else None
        pairs = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise ContractViolation(f"{path}: malformed line ({exc})") from exc
    if len(pairs) != m:
        raise ContractViolation(f"{path}: header announces {m} edges, found {len(pairs)}")
    log.debug("read %d vertices, %d edges from %s", n, m, path)
    return Graph.from_edges(n, pairs, wired)


def format_edge_list(graph: Graph) -> str:
    header = f"{graph.vertex_count} {graph.edge_count}"
    if graph.wired_vertex is not None:
        header += f" {graph.wired_vertex}"
    body = [f"{u} {v}" for u, v in graph.edges.tolist()]
    return "\n".join([header, *body]) + "\n"


def write_edge_list(graph: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(graph))


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> tuple[Graph, np.ndarray, np.ndarray]:
    """
    Subgraph on `vertices` with local ids 0..k-1 (in the given order).
    Returns (subgraph, local -> global vertex ids, local -> global edge ids).
    """
    members = np.asarray(list(vertices), dtype=np.int64)
    local = np.full(graph.vertex_count, -1, dtype=np.int64)
    local[members] = np.arange(len(members))
    ends = local[graph.edges]
    eids = np.flatnonzero((ends[:, 0] >= 0) & (ends[:, 1] >= 0))
    return Graph(len(members), ends[eids]), members, eids
