"""
induced.py - Induced-component graphs

Given a forest H inside G, the induced-component graph keeps every edge of G
whose endpoints lie in the same component of H. Its components, as vertex
partitions, are those of H.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContractViolation
from .forest import SpanningForest
from .graph import ComponentMap, Graph, components, induced_subgraph


@dataclass(frozen=True, eq=False)
class InducedComponentGraph:
    base: Graph
    edge_mask: np.ndarray
    components: ComponentMap

    @property
    def vertices(self) -> np.ndarray:
        return self.components.labels >= 0

    @property
    def edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.edge_mask)

    @cached_property
    def recomputed_components(self) -> ComponentMap:
        return components(self.base, self.edge_mask, self.vertices)

    def component_graph(self, label: int) -> tuple[Graph, np.ndarray, np.ndarray]:
        """(subgraph on one component with local ids, local->global vertex ids, local->global edge ids)."""
        sub, members, eids = induced_subgraph(self.base, self.components.members(label))
        return sub, members, eids

    def key(self) -> tuple[tuple[int, ...], frozenset[frozenset[int]]]:
        """Hashable encoding: sorted edge ids plus the component partition."""
        return tuple(self.edge_ids.tolist()), self.components.partition()


def induced_from_components(graph: Graph, comp: ComponentMap) -> InducedComponentGraph:
    if len(comp.labels) != graph.vertex_count:
        raise ContractViolation(f"component map covers {len(comp.labels)} vertices, graph has {graph.vertex_count}")
    a = comp.labels[graph.edges[:, 0]]
    b = comp.labels[graph.edges[:, 1]]
    mask = (a >= 0) & (a == b)
    mask.setflags(write=False)
    return InducedComponentGraph(graph, mask, comp)


def induced_component_graph(graph: Graph, forest: SpanningForest, vertices: np.ndarray | None = None) -> InducedComponentGraph:
    """
    Induced-component graph of the forest H. `vertices` (boolean mask) is the vertex set the
    caller expects the forest to cover; by default every vertex except the
    wired one.
    """
    if forest.graph.vertex_count != graph.vertex_count:
        raise ContractViolation("forest and graph have different vertex counts")
    if vertices is None:
        vertices = np.ones(graph.vertex_count, dtype=bool)
        if graph.wired_vertex is not None:
            vertices[graph.wired_vertex] = False
    if not np.array_equal(np.asarray(vertices, dtype=bool), forest.vertices):
        raise ContractViolation("forest vertex set differs from the graph's vertex set")
    if forest.graph is not graph:
        # forest edge ids refer to another graph: relabel by endpoints
        comp = components(graph, _edge_mask_from_pairs(graph, forest), forest.vertices)
    else:
        comp = forest.components
    return induced_from_components(graph, comp)


def _edge_mask_from_pairs(graph: Graph, forest: SpanningForest) -> np.ndarray:
    mask = np.zeros(graph.edge_count, dtype=bool)
    for u, v in forest.graph.edges[forest.edge_ids].tolist():
        mask[graph.edge_between(u, v)] = True
    return mask


def restrict_to_vertices(graph: Graph, edge_ids, vertices: np.ndarray) -> InducedComponentGraph:
    """Induced-component graph of the forest given by `edge_ids` on the vertex subset `vertices`."""
    mask = np.zeros(graph.edge_count, dtype=bool)
    mask[list(edge_ids)] = True
    return induced_from_components(graph, components(graph, mask, vertices))
