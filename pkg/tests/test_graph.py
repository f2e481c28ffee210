"""
tests/test_graph.py - Graphs, lattice boxes, components and induced-component graphs

Covers:
- wired/free box vertex and edge counts, multi-edges at corners
- component labelling (smallest-vertex order) against networkx
- induced-component graph examples, monotonicity and idempotence
- edge-list IO and the two-copy graph

Run: pytest tests/test_graph.py -v
"""

import networkx as nx
import numpy as np
import pytest

from forestlab.config import DEFAULT_SETTINGS
from forestlab.errors import ContractViolation, DomainError, ResourceError
from forestlab.forest import SpanningForest
from forestlab.graph import Graph, components, format_edge_list, induced_subgraph, read_edge_list, write_edge_list
from forestlab.induced import induced_component_graph
from forestlab.lattice import Boundary, LatticeBoxSpec, build_lattice_box, counterexample_graph

C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.mark.parametrize("d, r, boundary, vertices, edges", [
    (1, 1, Boundary.FREE, 3, 2),
    (1, 1, Boundary.WIRED, 4, 4),
    (2, 1, Boundary.WIRED, 10, 24),
    (2, 1, Boundary.FREE, 9, 12),
    (3, 2, Boundary.FREE, 125, 300),
    (3, 2, Boundary.WIRED, 126, 450),
])
def test_box_counts(d, r, boundary, vertices, edges):
    graph = build_lattice_box(LatticeBoxSpec(d, r, boundary))
    assert graph.vertex_count == vertices
    assert graph.edge_count == edges
    assert graph.degrees.sum() == 2 * graph.edge_count


def test_wired_box_endpoints_and_corner_multi_edges():
    spec = LatticeBoxSpec(1, 1, Boundary.WIRED)
    graph = build_lattice_box(spec)
    w = spec.wired_vertex
    assert graph.wired_vertex == w == 3
    assert sorted(graph.neighbors(w)[0].tolist()) == [0, 2]

    spec2 = LatticeBoxSpec(2, 1, Boundary.WIRED)
    g2 = build_lattice_box(spec2)
    corner = spec2.vertex_id((1, 1))
    nbrs, eids = g2.neighbors(corner)
    assert (nbrs == spec2.wired_vertex).sum() == 2, "a corner carries two parallel edges to the wired vertex"
    assert len(set(eids.tolist())) == len(eids)
    # every box vertex has degree 2d in the wired box
    assert np.all(g2.degrees[: spec2.box_vertex_count] == 4)


def test_origin_and_coordinates_round_trip():
    spec = LatticeBoxSpec(3, 2)
    assert spec.point(spec.origin) == (0, 0, 0)
    assert spec.vertex_id((-2, 1, 0)) != spec.vertex_id((1, -2, 0))
    with pytest.raises(DomainError):
        spec.vertex_id((3, 0, 0))


def test_box_budget_names_requested_count():
    tight = DEFAULT_SETTINGS.replace(vertex_budget=100)
    with pytest.raises(ResourceError) as info:
        build_lattice_box(LatticeBoxSpec(2, 5), settings=tight)
    assert info.value.requested == 11 * 11 + 1
    assert "122" in str(info.value)


def test_wired_box_embeds_in_larger_box():
    small, big = LatticeBoxSpec(2, 2), LatticeBoxSpec(2, 3)
    g_small, g_big = build_lattice_box(small), build_lattice_box(big)
    for u, v in g_small.edges.tolist():
        if small.wired_vertex in (u, v):
            continue
        g_big.edge_between(big.vertex_id(small.point(u)), big.vertex_id(small.point(v)))


def test_components_examples():
    empty = components(C4, np.zeros(4, dtype=bool))
    assert empty.component_count == 4
    assert components(C4).component_count == 1
    opposite = components(C4, np.array([True, False, True, False]))
    assert opposite.component_count == 2
    assert sorted(opposite.sizes().tolist()) == [2, 2]
    assert opposite.labels.tolist() == [0, 0, 1, 1]


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_components_match_networkx(seed):
    g = nx.gnm_random_graph(30, 25, seed=seed)
    graph = Graph.from_edges(30, list(g.edges()))
    comp = components(graph)
    assert comp.partition() == frozenset(frozenset(c) for c in nx.connected_components(g))
    # labels follow smallest vertex id
    firsts = [int(comp.members(lab).min()) for lab in range(comp.component_count)]
    assert firsts == sorted(firsts)


def test_components_respect_vertex_subset():
    vertices = np.array([True, True, False, True])
    comp = components(C4, None, vertices)
    assert comp.labels[2] == -1
    assert comp.partition() == frozenset([frozenset([0, 1, 3])])


def test_induced_component_graph_examples():
    # spanning tree -> every edge
    tree = SpanningForest.from_edge_ids(C4, [0, 1, 2])
    assert induced_component_graph(C4, tree).edge_mask.all()
    # discrete forest -> no edges
    discrete = SpanningForest.from_edge_ids(C4, [])
    assert not induced_component_graph(C4, discrete).edge_mask.any()
    # two opposite edges -> exactly those edges
    pair = SpanningForest.from_edge_ids(C4, [0, 2])
    K = induced_component_graph(C4, pair)
    assert K.edge_ids.tolist() == [0, 2]
    assert K.recomputed_components.partition() == pair.components.partition()


def test_induced_component_graph_adds_chords():
    # a path through a triangle picks up the closing edge
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    path = SpanningForest.from_edge_ids(tri, [0, 1])
    assert induced_component_graph(tri, path).edge_ids.tolist() == [0, 1, 2]


def test_induced_component_graph_is_monotone():
    rng = np.random.default_rng(5)
    g = nx.gnm_random_graph(12, 30, seed=5)
    graph = Graph.from_edges(12, list(g.edges()))
    tree = list(nx.minimum_spanning_tree(g).edges())
    ids = [graph.edge_between(u, v) for u, v in tree]
    for _ in range(10):
        keep = sorted(rng.choice(ids, size=rng.integers(0, len(ids)), replace=False).tolist())
        extra = sorted(set(keep) | {ids[rng.integers(len(ids))]})
        small = induced_component_graph(graph, SpanningForest.from_edge_ids(graph, keep)).edge_mask
        large = induced_component_graph(graph, SpanningForest.from_edge_ids(graph, extra)).edge_mask
        assert np.all(large[small])


def test_induced_component_graph_vertex_mismatch():
    spec = LatticeBoxSpec(1, 1)
    graph = build_lattice_box(spec)
    whole = SpanningForest.from_edge_ids(graph, [0, 1, 2])  # covers the wired vertex too
    with pytest.raises(ContractViolation):
        induced_component_graph(graph, whole)


def test_induced_subgraph_local_ids():
    sub, members, eids = induced_subgraph(C4, [3, 0, 1])
    assert members.tolist() == [3, 0, 1]
    assert sub.vertex_count == 3
    assert sorted(eids.tolist()) == [0, 3]


def test_edge_list_io(tmp_path):
    graph = build_lattice_box(LatticeBoxSpec(2, 1))
    path = tmp_path / "box.txt"
    write_edge_list(graph, path)
    back = read_edge_list(path)
    assert back.vertex_count == graph.vertex_count
    assert back.wired_vertex == graph.wired_vertex
    assert np.array_equal(back.edges, graph.edges)
    assert format_edge_list(back) == path.read_text()


@pytest.mark.parametrize("text", [
    "",
    "3\n0 1\n",
    "3 2\n0 1\n",
    "3 1\n0 x\n",
    "3 1\n0 5\n",
])
def test_edge_list_rejects_malformed_files(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ContractViolation):
        read_edge_list(path)


def test_graph_rejects_self_loops_and_bad_wired_vertex():
    with pytest.raises(ContractViolation):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ContractViolation):
        Graph.from_edges(2, [(0, 1)], wired_vertex=5)


@pytest.mark.parametrize("r, expected", [(1, 2 * (3**5 + 1)), (2, 2 * (5**5 + 1))])
def test_counterexample_graph_counts(r, expected):
    cx = counterexample_graph(r)
    assert cx.graph.vertex_count == expected
    o1, o2 = cx.origins
    assert cx.graph.edges[cx.bridge_edge].tolist() == [o1, o2]


def test_counterexample_bridge_is_cut_edge():
    cx = counterexample_graph(1)
    w1, w2 = cx.wired_vertices
    mask = cx.graph.without_vertex_edges(w1) & cx.graph.without_vertex_edges(w2)
    keep = np.ones(cx.graph.vertex_count, dtype=bool)
    keep[[w1, w2]] = False
    assert components(cx.graph, mask, keep).component_count == 1
    mask[cx.bridge_edge] = False
    assert components(cx.graph, mask, keep).component_count == 2


def test_counterexample_common_wired_graph_keeps_edge_ids():
    cx = counterexample_graph(1)
    identified = cx.common_wired_graph()
    assert identified.vertex_count == cx.graph.vertex_count - 1
    assert identified.edge_count == cx.graph.edge_count
    w1, _ = cx.wired_vertices
    assert identified.wired_vertex == w1
    assert identified.degree(w1) == 2 * cx.graph.degree(w1)


if __name__ == "__main__":
    pytest.main(["-v", __file__])
