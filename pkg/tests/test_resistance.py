"""
tests/test_resistance.py - Effective resistance, Nash-Williams and Thomson bounds

Covers:
- closed-form resistances on small networks
- wired-box resistance by radius
- the bound sandwich on random graphs (BFS-layer cuts, current and path flows)
- series-parallel reduction and Kirchhoff's edge probabilities

Run: pytest tests/test_resistance.py -v
"""

import math

import networkx as nx
import numpy as np
import pytest

from forestlab.config import DEFAULT_SETTINGS
from forestlab.errors import DomainError
from forestlab.graph import Graph
from forestlab.lattice import LatticeBoxSpec, build_lattice_box
from forestlab.oracles import enumerate_spanning_trees
from forestlab.resistance import (
    CutSetFamily,
    UnitFlow,
    current_flow,
    effective_resistance,
    energy,
    kirchhoff_edge_probabilities,
    local_modification_gap,
    nash_williams_lower_bound,
    path_flow,
    series_parallel_resistance,
    solve_potential,
    thomson_upper_bound,
    wired_effective_resistance,
)

PATH4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
K4 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
# terminals 0 and 3, bridge 1-2
WHEATSTONE = Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)])


@pytest.mark.parametrize("graph, a, b, expected", [
    (PATH4, 0, 3, 3.0),
    (Graph.from_edges(2, [(0, 1), (0, 1)]), 0, 1, 0.5),
    (K4, 0, 1, 0.5),
    (C4, 0, 1, 0.75),
    (C4, 0, 2, 1.0),
    (WHEATSTONE, 0, 3, 1.0),
])
def test_closed_form_resistances(graph, a, b, expected):
    assert effective_resistance(graph, a, b) == pytest.approx(expected, rel=1e-9)


def test_resistance_between_sets():
    # every edge of C4 joins {1, 3} to {0, 2}: four unit resistors in parallel
    assert effective_resistance(C4, [1, 3], [0, 2]) == pytest.approx(0.25)


def test_disconnected_terminals_give_infinity():
    split = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert math.isinf(effective_resistance(split, 0, 3))
    mask = np.array([True, False, True, False])
    assert math.isinf(effective_resistance(C4, 0, 2, edge_mask=mask))


@pytest.mark.parametrize("A, B", [(0, 0), ([0, 1], [1, 2]), ([], [1]), (0, 9)])
def test_bad_terminals(A, B):
    with pytest.raises(DomainError):
        effective_resistance(C4, A, B)


def test_edge_mask_matches_subgraph():
    mask = np.array([True, True, True, False])
    assert effective_resistance(C4, 0, 3, edge_mask=mask) == pytest.approx(3.0)


def test_potential_is_harmonic():
    graph = build_lattice_box(LatticeBoxSpec(2, 3))
    field = solve_potential(graph, 0, graph.wired_vertex)
    assert field.connected
    assert field.harmonic_residual(graph) < 1e-9
    assert field.values.min() >= -1e-12 and field.values.max() <= 1 + 1e-12


def test_iterative_solver_agrees_with_dense():
    spec = LatticeBoxSpec(2, 4)
    graph = build_lattice_box(spec)
    dense = effective_resistance(graph, spec.origin, graph.wired_vertex)
    sparse = effective_resistance(graph, spec.origin, graph.wired_vertex, settings=DEFAULT_SETTINGS.replace(dense_solver_cutoff=10))
    assert sparse == pytest.approx(dense, rel=1e-7)


def test_one_dimensional_wired_box():
    [(r, value)] = wired_effective_resistance(1, [1], (0,), (1,))
    assert r == 1
    assert value == pytest.approx(0.75)


@pytest.mark.parametrize("d", [2, 3])
def test_wired_resistance_nondecreasing_in_radius(d):
    x, y = (0,) * d, (1,) + (0,) * (d - 1)
    rows = wired_effective_resistance(d, [1, 2, 3, 4], x, y)
    values = [v for _, v in rows]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:])), values
    # adjacent points: resistance of one edge at most
    assert values[-1] <= 1.0


# ============================================================================
# Bounds
# ============================================================================

def _layer_cuts(graph, g, source):
    dist = nx.single_source_shortest_path_length(g, source)
    cuts = []
    for k in range(max(dist.values())):
        cuts.append([e for e, (u, v) in enumerate(graph.edges.tolist()) if {dist[u], dist[v]} == {k, k + 1}])
    return cuts, dist


@pytest.mark.parametrize("seed", range(6))
def test_bound_sandwich_on_random_graphs(seed):
    g = nx.connected_watts_strogatz_graph(24, 4, 0.3, seed=seed)
    graph = Graph.from_edges(24, list(g.edges()))
    cuts, dist = _layer_cuts(graph, g, 0)
    target = max(dist, key=dist.get)
    cuts = cuts[: dist[target]]
    R = effective_resistance(graph, 0, target)

    lower = nash_williams_lower_bound(graph, 0, target, CutSetFamily(cuts))
    current = current_flow(graph, 0, target)
    path = UnitFlow(path_flow(graph, nx.shortest_path(g, 0, target)))
    assert lower <= R + 1e-9
    assert thomson_upper_bound(graph, 0, target, current) == pytest.approx(R, rel=1e-8)
    assert thomson_upper_bound(graph, 0, target, path) >= R - 1e-9
    assert R == pytest.approx(nx.resistance_distance(g, 0, target), rel=1e-8)


def test_cut_multiplicity_weights():
    path3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert nash_williams_lower_bound(path3, 0, 2, CutSetFamily([[0], [1]])) == pytest.approx(2.0)
    repeated = CutSetFamily([[0], [0]])
    assert repeated.multiplicity[0] == 2
    assert repeated.weights() == [2, 2]
    assert nash_williams_lower_bound(path3, 0, 2, repeated) == pytest.approx(1.0)


def test_non_separating_cut_is_rejected():
    with pytest.raises(DomainError):
        nash_williams_lower_bound(C4, 0, 2, CutSetFamily([[0]]))
    with pytest.raises(DomainError):
        nash_williams_lower_bound(C4, 0, 2, CutSetFamily([[0, 3]]), conductance=2.0)


def test_flow_validation():
    with pytest.raises(DomainError):
        UnitFlow(np.array([1.0, 0.0, 0.0, 0.0])).validate(C4, 0, 2)
    with pytest.raises(DomainError):
        UnitFlow(np.zeros(3)).validate(C4, 0, 2)
    flow = UnitFlow(path_flow(C4, [0, 1, 2]))
    assert thomson_upper_bound(C4, 0, 2, flow) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        current_flow(Graph.from_edges(4, [(0, 1), (2, 3)]), 0, 3)


def test_energy_counts_parallel_edges():
    double = Graph.from_edges(2, [(0, 1), (0, 1)])
    assert energy([1.0, 0.0], double) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        energy([1.0], double)


def test_adding_edges_never_raises_resistance():
    graph = build_lattice_box(LatticeBoxSpec(2, 2, "free"))
    shortcut = graph.with_edges([(0, 24), (4, 20)])
    pairs = [(0, 24), (12, 0), (3, 17)]
    assert local_modification_gap(graph, shortcut, pairs) >= -1e-12
    with pytest.raises(DomainError):
        local_modification_gap(graph, shortcut, [(0, 99)])


# ============================================================================
# Series-parallel and Kirchhoff
# ============================================================================

@pytest.mark.parametrize("graph, a, b", [
    (PATH4, 0, 3),
    (C4, 0, 2),
    (Graph.from_edges(3, [(0, 1), (0, 1), (1, 2), (2, 0)]), 0, 2),
    (Graph.from_edges(6, [(0, 1), (1, 2), (0, 3), (3, 2), (2, 4), (4, 5), (2, 5)]), 0, 5),
])
def test_series_parallel_oracle(graph, a, b):
    assert series_parallel_resistance(graph, a, b) == pytest.approx(effective_resistance(graph, a, b), rel=1e-9)


def test_wheatstone_bridge_is_not_series_parallel():
    with pytest.raises(DomainError):
        series_parallel_resistance(WHEATSTONE, 0, 3)


@pytest.mark.parametrize("graph", [
    K4,
    C4,
    Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 3)]),
    Graph.from_edges(3, [(0, 1), (0, 1), (1, 2), (0, 2)]),
])
def test_kirchhoff_matches_enumeration(graph):
    trees = enumerate_spanning_trees(graph)
    frequency = np.zeros(graph.edge_count)
    for tree in trees:
        frequency[list(tree)] += 1
    frequency /= len(trees)
    probs = kirchhoff_edge_probabilities(graph, range(graph.edge_count))
    assert probs == pytest.approx(frequency, abs=1e-9)
    # expected tree size
    assert probs.sum() == pytest.approx(graph.vertex_count - 1)


if __name__ == "__main__":
    pytest.main(["-v", __file__])
