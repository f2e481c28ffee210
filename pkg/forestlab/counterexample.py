"""
counterexample.py - Two wired copies of Z^5 joined by a bridge

On the two-copy graph the bridge e = (o_1, o_2) lies in the wired forest with
probability R_eff(o_1, o_2), measured in the graph with both exteriors
identified. Conditioned on e being in the forest, the two halves are
independent wired forests of the copies, joined by e. T_e is the tree through
the bridge and H is the induced-component graph of T_e together with the
edges from T_e to the (identified) exterior. Since H is a subgraph of the
identified graph, R_H >= R_G always; the comparison measures how far above.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .graph import Graph, components
from .lattice import CounterexampleGraph, counterexample_graph
from .resistance import effective_resistance
from .rng import RngStream, as_generator
from .stats import mean_ci
from .wilson import wilson_ust

log = logging.getLogger(__name__)


def bridge_tree_vertices(cx: CounterexampleGraph, rng: RngStream | np.random.Generator, *, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """Vertex mask of T_e in one forest sampled conditionally on the bridge being present."""
    graph = cx.graph
    w1, w2 = cx.wired_vertices
    mask = np.ones(graph.edge_count, dtype=bool)
    mask[cx.bridge_edge] = False
    forest = wilson_ust(graph, [w1, w2], as_generator(rng), edge_mask=mask, settings=settings)

    kept = np.zeros(graph.edge_count, dtype=bool)
    kept[forest.edge_ids] = True
    kept[cx.bridge_edge] = True
    kept &= graph.without_vertex_edges(w1) & graph.without_vertex_edges(w2)
    box = np.ones(graph.vertex_count, dtype=bool)
    box[[w1, w2]] = False
    comp = components(graph, kept, box)
    return comp.labels == comp.labels[cx.origins[0]]


def tree_neighbourhood_mask(identified: Graph, tree: np.ndarray) -> np.ndarray:
    """Edges of the identified graph with both ends in T_e or the exterior."""
    inside = tree[: identified.vertex_count].copy()
    inside[identified.wired_vertex] = True
    ends = identified.edges
    return inside[ends[:, 0]] & inside[ends[:, 1]]


@dataclass(frozen=True)
class CounterexampleReport:
    radius: int
    graph_resistance: float
    tree_resistance_mean: float
    tree_resistance_half_width: float
    strictly_larger_fraction: float
    tree_size_mean: float
    samples: int

    @property
    def gap(self) -> float:
        return self.tree_resistance_mean - self.graph_resistance

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "R_G": self.graph_resistance,
            "R_H_mean": self.tree_resistance_mean,
            "R_H_half_width": self.tree_resistance_half_width,
            "gap": self.gap,
            "strictly_larger_fraction": self.strictly_larger_fraction,
            "tree_size_mean": self.tree_size_mean,
            "samples": self.samples,
        }


class CounterexampleSampler:
    def __init__(self, r: int, *, dimension: int = 5, settings: Settings = DEFAULT_SETTINGS):
        self.settings = settings
        self.cx = counterexample_graph(r, dimension=dimension, settings=settings)
        self.identified = self.cx.common_wired_graph()
        o1, o2 = self.cx.origins
        self.graph_resistance = effective_resistance(self.identified, o1, o2, settings=settings)

    def replica(self, stream: RngStream) -> tuple[float, int]:
        """(R_H(o_1, o_2), |T_e|) for one conditioned forest."""
        # the bridge lies in T_e and its inclusion probability in G is R_G(o_1, o_2),
        # so R_H > R_G on the bridge means the induced graph is not electrically G near e

        tree = bridge_tree_vertices(self.cx, stream, settings=self.settings)
        mask = tree_neighbourhood_mask(self.identified, tree)
        o1, o2 = self.cx.origins
        return effective_resistance(self.identified, o1, o2, edge_mask=mask, settings=self.settings), int(tree.sum())

    def report(self, rows: list[tuple[float, int]]) -> CounterexampleReport:
        values = np.array([R for R, _ in rows])
        mean, half = mean_ci(values)
        larger = float(np.mean(values > self.graph_resistance + 1e-12))
        report = CounterexampleReport(
            radius=self.cx.spec.radius,
            graph_resistance=self.graph_resistance,
            tree_resistance_mean=mean,
            tree_resistance_half_width=half,
            strictly_larger_fraction=larger,
            tree_size_mean=float(np.mean([s for _, s in rows])),
            samples=len(rows),
        )
        log.info("counterexample r=%d: R_G=%.6f, mean R_H=%.6f +- %.6f", report.radius, report.graph_resistance, mean, half)
        return report


def counterexample_experiment(r: int, replicas: int, seed: int, *, settings: Settings = DEFAULT_SETTINGS) -> CounterexampleReport:
    """Replica i uses RngStream(seed, i)."""
    sampler = CounterexampleSampler(r, settings=settings)
    return sampler.report([sampler.replica(RngStream(seed, i)) for i in range(replicas)])
