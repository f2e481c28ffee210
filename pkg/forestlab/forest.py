"""
forest.py - Rooted spanning forests

A SpanningForest stores, for every vertex it covers, the parent vertex and the
graph edge id leading to it; roots have parent -1. Edge sets, component labels
and root paths are derived from the parent table.

Text dump format (one line per covered vertex, roots first):
    v parent_v edge_id          (parent_v = edge_id = -1 for roots)
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ContractViolation
from .graph import ComponentMap, Graph, components

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpanningForest:
    graph: Graph
    parent: np.ndarray
    parent_edge: np.ndarray
    vertices: np.ndarray
    roots: tuple[int, ...]

    def __post_init__(self):
        for name in ("parent", "parent_edge"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        vertices = np.asarray(self.vertices, dtype=bool)
        vertices.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "roots", tuple(int(r) for r in self.roots))

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.sum())

    @cached_property
    def edge_ids(self) -> np.ndarray:
        ids = self.parent_edge[self.parent_edge >= 0]
        return np.sort(ids)

    @cached_property
    def edge_mask(self) -> np.ndarray:
        mask = np.zeros(self.graph.edge_count, dtype=bool)
        mask[self.edge_ids] = True
        return mask

    @cached_property
    def components(self) -> ComponentMap:
        return components(self.graph, self.edge_mask, self.vertices)

    def edge_key(self) -> tuple[int, ...]:
        return tuple(self.edge_ids.tolist())

    def path_to_root(self, v: int) -> list[int]:
        if not self.vertices[v]:
            raise ContractViolation(f"vertex {v} is not covered by the forest")
        out = [v]
        parent = self.parent
        while parent[out[-1]] >= 0:
            out.append(int(parent[out[-1]]))
            if len(out) > len(parent):
                raise ContractViolation("parent table contains a cycle")
        return out

    def root_of(self, v: int) -> int:
        return self.path_to_root(v)[-1]

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in range(len(self.parent))]
        for v, p in enumerate(self.parent.tolist()):
            if p >= 0:
                kids[p].append(v)
        return kids

    def validate(self) -> None:
        """Raise ContractViolation unless the parent table is an acyclic rooted forest of graph edges."""
        edges = self.graph.edges
        root_set = set(self.roots)
        for v in np.flatnonzero(self.vertices).tolist():
            p, e = int(self.parent[v]), int(self.parent_edge[v])
            if p < 0:
                if v not in root_set:
                    raise ContractViolation(f"vertex {v} has no parent and is not a root")
                continue
            if not self.vertices[p]:
                raise ContractViolation(f"parent {p} of {v} is not covered")
            if sorted(edges[e].tolist()) != sorted((v, p)):
                raise ContractViolation(f"edge {e} does not join {v} and its parent {p}")
        for v in np.flatnonzero(self.vertices).tolist():
            self.path_to_root(v)
        if len(self.edge_ids) != self.vertex_count - len(self.roots):
            raise ContractViolation("edge count does not match #vertices - #roots")

    @classmethod
    def from_edge_ids(cls, graph: Graph, edge_ids: Iterable[int], vertices: np.ndarray | None = None) -> SpanningForest:
        """Orient an acyclic edge set; each component is rooted at its smallest vertex."""
        n = graph.vertex_count
        covered = np.ones(n, dtype=bool) if vertices is None else np.asarray(vertices, dtype=bool)
        incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e in edge_ids:
            u, v = graph.edges[e].tolist()
            if not (covered[u] and covered[v]):
                raise ContractViolation(f"edge {e} leaves the covered vertex set")
            incident[u].append((v, e))
            incident[v].append((u, e))
        parent = np.full(n, -1, dtype=np.int64)
        parent_edge = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        roots = []
        for r in np.flatnonzero(covered).tolist():
            if seen[r]:
                continue
            roots.append(r)
            seen[r] = True
            queue = deque([r])
            while queue:
                u = queue.popleft()
                for w, e in incident[u]:
                    if e == parent_edge[u]:
                        continue
                    if seen[w]:
                        raise ContractViolation(f"edge set contains a cycle through edge {e}")
                    seen[w] = True
                    parent[w], parent_edge[w] = u, e
                    queue.append(w)
        return cls(graph, parent, parent_edge, covered, tuple(roots))


def dump_forest(forest: SpanningForest) -> str:
    lines = [f"{r} -1 -1" for r in forest.roots]
    roots = set(forest.roots)
    for v in np.flatnonzero(forest.vertices).tolist():
        if v not in roots:
            lines.append(f"{v} {forest.parent[v]} {forest.parent_edge[v]}")
    return "\n".join(lines) + "\n"


def load_forest(graph: Graph, text: str | Path) -> SpanningForest:
    if isinstance(text, Path):
        text = text.read_text()
    n = graph.vertex_count
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    covered = np.zeros(n, dtype=bool)
    roots = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            v, p, e = (int(x) for x in line.split())
        except ValueError as exc:
            raise ContractViolation(f"forest dump line {lineno}: expected 'v parent edge'") from exc
        if not 0 <= v < n:
            raise ContractViolation(f"forest dump line {lineno}: vertex {v} outside the graph")
        covered[v] = True
        if p < 0:
            roots.append(v)
        else:
            parent[v], parent_edge[v] = p, e
    forest = SpanningForest(graph, parent, parent_edge, covered, tuple(roots))
    forest.validate()
    return forest


def dump_forests(forests: Iterable[SpanningForest]) -> str:
    """Several forests on one graph, each block headed by "# forest i"."""
    return "".join(f"# forest {i}\n" + dump_forest(f) for i, f in enumerate(forests))


def load_forests(graph: Graph, text: str | Path) -> list[SpanningForest]:
    if isinstance(text, Path):
        text = text.read_text()
    blocks = re.split(r"^# forest \d+\n", text, flags=re.MULTILINE)
    return [load_forest(graph, block) for block in blocks if block.strip()]


def edge_inclusion_frequencies(forests: Iterable[SpanningForest], edge_ids: Iterable[int]) -> tuple[np.ndarray, int]:
    """(count of forests containing each edge, number of forests)."""
    edge_ids = np.asarray(list(edge_ids), dtype=np.int64)
    counts = np.zeros(len(edge_ids), dtype=np.int64)
    total = 0
    for forest in forests:
        counts += forest.edge_mask[edge_ids]
        total += 1
    return counts, total
