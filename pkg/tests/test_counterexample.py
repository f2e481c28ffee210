"""
tests/test_counterexample.py - Two wired copies of Z^5 joined by a bridge

Run: pytest tests/test_counterexample.py -v
"""

import numpy as np
import pytest

from forestlab.counterexample import (
    CounterexampleSampler,
    bridge_tree_vertices,
    counterexample_experiment,
    tree_neighbourhood_mask,
)
from forestlab.lattice import LatticeBoxSpec, build_lattice_box
from forestlab.resistance import effective_resistance
from forestlab.rng import RngStream

SAMPLER = CounterexampleSampler(1)


def test_graph_resistance_is_bridge_parallel_to_exteriors():
    # the bridge in parallel with o1 -> exterior -> o2
    spec = LatticeBoxSpec(5, 1)
    R0 = effective_resistance(build_lattice_box(spec), spec.origin, spec.wired_vertex)
    expected = 2 * R0 / (1 + 2 * R0)
    assert SAMPLER.graph_resistance == pytest.approx(expected, rel=1e-9)
    assert 0.0 < SAMPLER.graph_resistance < 1.0


@pytest.mark.parametrize("seed", range(4))
def test_bridge_tree_spans_both_copies(seed):
    cx = SAMPLER.cx
    tree = bridge_tree_vertices(cx, RngStream(seed))
    o1, o2 = cx.origins
    w1, w2 = cx.wired_vertices
    assert tree[o1] and tree[o2]
    assert not tree[w1] and not tree[w2]
    n = cx.spec.vertex_count
    assert tree[:n].any() and tree[n:].any()


def test_neighbourhood_mask_stays_inside_tree():
    identified = SAMPLER.identified
    tree = bridge_tree_vertices(SAMPLER.cx, RngStream(9))
    mask = tree_neighbourhood_mask(identified, tree)
    inside = tree[: identified.vertex_count].copy()
    inside[identified.wired_vertex] = True
    ends = identified.edges[mask]
    assert inside[ends].all()
    assert mask[SAMPLER.cx.bridge_edge]


@pytest.mark.parametrize("seed", range(5))
def test_tree_resistance_never_below_graph_resistance(seed):
    R_H, size = SAMPLER.replica(RngStream(seed))
    assert size >= 2
    assert R_H >= SAMPLER.graph_resistance - 1e-9


def test_report_and_reproducibility():
    a = counterexample_experiment(1, 6, seed=3)
    b = counterexample_experiment(1, 6, seed=3)
    assert a == b
    assert a.samples == 6
    assert a.gap >= -1e-9
    assert 0.0 <= a.strictly_larger_fraction <= 1.0
    data = a.as_dict()
    assert set(data) == {"radius", "R_G", "R_H_mean", "R_H_half_width", "gap", "strictly_larger_fraction", "tree_size_mean", "samples"}
    assert np.isfinite(data["R_H_mean"])


if __name__ == "__main__":
    pytest.main(["-v", __file__])
