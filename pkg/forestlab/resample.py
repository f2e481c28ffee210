"""
resample.py - Resampling a WSF inside a ball through its induced-component graph

Conditioned on K, the induced-component graph of WSF restricted to a ball B,
the restriction is a uniform spanning forest of K: an independent uniform
spanning tree on every component of K. On a finite graph the free spanning
forest of K is exactly this component-wise UST, so usf_on_components is the
resampling step.

exact_conditional_test checks the statement combinatorially on small wired
graphs by enumerating every spanning tree. statistical_resample_test compares
WSF restricted to B with its resampled version on lattice boxes.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import ContractViolation
from .forest import SpanningForest
from .graph import Graph, induced_subgraph
from .induced import InducedComponentGraph, restrict_to_vertices
from .lattice import LatticeBoxSpec, build_lattice_box
from .oracles import iter_spanning_trees, spanning_tree_count
from .rng import RngStream, as_generator
from .stats import StatResult, TvReport, chi_square_two_sample, tv_bootstrap
from .wilson import wilson_ust, wsf_ball_edges

log = logging.getLogger(__name__)

BOOTSTRAP_STREAM = 2**31 - 1


def usf_on_components(
    K: InducedComponentGraph,
    rng: RngStream | np.random.Generator,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> SpanningForest:
    """Independent uniform spanning tree on each component of K."""
    comp = K.components
    roots = [int(comp.members(label)[0]) for label in range(comp.component_count)]
    return wilson_ust(K.base, roots, rng, edge_mask=K.edge_mask, vertices=K.vertices, settings=settings)


def component_tree_counts(K: InducedComponentGraph, *, settings: Settings = DEFAULT_SETTINGS) -> list[int]:
    return [spanning_tree_count(K.component_graph(label)[0], settings=settings) for label in range(K.components.component_count)]


@dataclass(frozen=True)
class ConditionalLawTable:
    """Per K key, the law of the restricted forest (edge-id tuples) given K."""

    rows: dict[tuple, dict[tuple[int, ...], float]]

    @classmethod
    def from_counts(cls, counts: dict[tuple, Counter]) -> ConditionalLawTable:
        rows = {}
        for key, counter in counts.items():
            total = sum(counter.values())
            rows[key] = {forest: c / total for forest, c in counter.items()}
        return cls(rows)

    def check_normalized(self, tol: float = 1e-12) -> bool:
        return all(abs(sum(row.values()) - 1.0) <= tol for row in self.rows.values())


@dataclass(frozen=True)
class ConditionalGroup:
    edges: tuple[int, ...]
    partition: tuple[tuple[int, ...], ...]
    forest_counts: dict[tuple[int, ...], int]
    expected_forests: int

    @property
    def all_equal(self) -> bool:
        return len(set(self.forest_counts.values())) == 1

    @property
    def complete(self) -> bool:
        return len(self.forest_counts) == self.expected_forests

    @property
    def extension_count(self) -> int:
        return next(iter(self.forest_counts.values()))

    def as_dict(self) -> dict:
        return {
            "K_edges": list(self.edges),
            "partition": [list(p) for p in self.partition],
            "forests": len(self.forest_counts),
            "expected_forests": self.expected_forests,
            "extension_counts": sorted(set(self.forest_counts.values())),
            "all_equal": self.all_equal,
            "complete": self.complete,
        }


@dataclass(frozen=True)
class ExactConditionalReport:
    tree_count: int
    ball: tuple[int, ...]
    groups: list[ConditionalGroup]

    @property
    def all_equal(self) -> bool:
        return all(g.all_equal and g.complete for g in self.groups)

    def table(self) -> ConditionalLawTable:
        return ConditionalLawTable.from_counts({(g.edges, g.partition): Counter(g.forest_counts) for g in self.groups})

    def as_dict(self) -> dict:
        return {
            "tree_count": self.tree_count,
            "ball": list(self.ball),
            "groups": [g.as_dict() for g in self.groups],
            "all_equal": self.all_equal,
        }


def exact_conditional_test(graph: Graph, ball: Iterable[int], *, settings: Settings = DEFAULT_SETTINGS) -> ExactConditionalReport:
    """
    Enumerate every spanning tree of the (wired) graph, restrict it to `ball`,
    group by the induced-component graph K of the restriction, and count how
    many trees extend each restricted forest. Within a group, every spanning
    forest of K connected on each component of K must appear, each with the
    same count.
    """
    ball = sorted({int(v) for v in ball})
    if not ball:
        raise ContractViolation("ball must contain at least one vertex")
    sub, members, eids = induced_subgraph(graph, ball)
    local_edge = {int(g): i for i, g in enumerate(eids.tolist())}

    grouped: dict[tuple, Counter] = defaultdict(Counter)
    Ks: dict[tuple, InducedComponentGraph] = {}
    keys: dict[tuple[int, ...], tuple] = {}
    everything = np.ones(sub.vertex_count, dtype=bool)
    total = 0
    for tree in iter_spanning_trees(graph, settings=settings):
        total += 1
        restricted = tuple(local_edge[e] for e in tree if e in local_edge)
        key = keys.get(restricted)
        if key is None:
            K = restrict_to_vertices(sub, restricted, everything)
            k_edges, partition = K.key()
            key = keys[restricted] = (k_edges, tuple(sorted(tuple(sorted(p)) for p in partition)))
            Ks.setdefault(key, K)
        grouped[key][restricted] += 1

    def to_global(local: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(int(eids[i]) for i in local)

    groups = []
    for key in sorted(grouped):
        expected = math.prod(component_tree_counts(Ks[key], settings=settings))
        groups.append(
            ConditionalGroup(
                edges=to_global(key[0]),
                partition=tuple(tuple(int(members[v]) for v in part) for part in key[1]),
                forest_counts={to_global(f): c for f, c in grouped[key].items()},
                expected_forests=expected,
            )
        )
    report = ExactConditionalReport(total, tuple(ball), groups)
    log.info("exact conditional test: %d trees, %d K-groups, all equal: %s", total, len(groups), report.all_equal)
    return report


@dataclass
class ResampleCounts:
    """Cell counts of both pipelines; merging is associative so replica chunks combine in any order."""

    direct: Counter = field(default_factory=Counter)
    resampled: Counter = field(default_factory=Counter)
    partition_mismatches: int = 0

    def merge(self, other: ResampleCounts) -> ResampleCounts:
        return ResampleCounts(self.direct + other.direct, self.resampled + other.resampled, self.partition_mismatches + other.partition_mismatches)

    @property
    def replicas(self) -> int:
        return sum(self.direct.values())


class ResampleSampler:
    """
    Both pipelines on one wired box and ball. Cells are ball-local edge-id
    tuples. Replica streams: substream 0 feeds pipeline A, 1 and 2 pipeline B.
    """

    def __init__(self, spec: LatticeBoxSpec, ball_radius: int, *, graph: Graph | None = None, settings: Settings = DEFAULT_SETTINGS):
        self.spec = spec
        self.settings = settings
        self.graph = build_lattice_box(spec, settings=settings) if graph is None else graph
        self.ball = spec.ball(ball_radius).tolist()
        self.ball_graph, _, eids = induced_subgraph(self.graph, self.ball)
        self._local_edge = {int(g): i for i, g in enumerate(eids.tolist())}
        self._everything = np.ones(self.ball_graph.vertex_count, dtype=bool)

    def direct(self, rng: RngStream) -> tuple[int, ...]:
        edges = wsf_ball_edges(self.graph, self.ball, rng, settings=self.settings)
        return tuple(sorted(self._local_edge[e] for e in edges))

    def resampled(self, observed_rng: RngStream, usf_rng: RngStream) -> tuple[tuple[int, ...], bool]:
        """(resampled cell, whether its partition matches K's)."""
        K = restrict_to_vertices(self.ball_graph, self.direct(observed_rng), self._everything)
        forest = usf_on_components(K, usf_rng, settings=self.settings)
        return forest.edge_key(), forest.components.partition() == K.components.partition()

    def replica(self, stream: RngStream) -> ResampleCounts:
        cell, same = self.resampled(stream.substream(1), stream.substream(2))
        return ResampleCounts(Counter([self.direct(stream.substream(0))]), Counter([cell]), 0 if same else 1)


def resample_counts(
    sampler: ResampleSampler,
    seed: int,
    start: int,
    stop: int,
) -> ResampleCounts:
    """Replicas start..stop-1; replica i draws from RngStream(seed, i)."""
    out = ResampleCounts()
    for i in range(start, stop):
        part = sampler.replica(RngStream(seed, i))
        out.direct.update(part.direct)
        out.resampled.update(part.resampled)
        out.partition_mismatches += part.partition_mismatches
    return out


@dataclass(frozen=True)
class ResampleReport:
    replicas: int
    ball_edges: int
    cells: int
    chi2: StatResult
    tv: TvReport
    coarsened: bool
    marginal_max_gap: float
    marginal_passed: bool
    partition_mismatches: int
    counts: ResampleCounts

    @property
    def passed(self) -> bool:
        if self.coarsened:
            return self.marginal_passed
        return self.chi2.passed and self.tv.consistent_with_zero

    def as_dict(self) -> dict:
        return {
            "replicas": self.replicas,
            "ball_edges": self.ball_edges,
            "cells": self.cells,
            "chi2": self.chi2.as_dict(),
            "tv": self.tv.as_dict(),
            "coarsened_to_edge_marginals": self.coarsened,
            "marginal_max_gap": self.marginal_max_gap,
            "marginal_passed": self.marginal_passed,
            "partition_mismatches": self.partition_mismatches,
            "passed": self.passed,
            "frequencies": {
                " ".join(map(str, cell)) or "-": [self.counts.direct.get(cell, 0), self.counts.resampled.get(cell, 0)]
                for cell in sorted(set(self.counts.direct) | set(self.counts.resampled))
            },
        }


def edge_marginals(counts: Counter, edge_count: int) -> np.ndarray:
    out = np.zeros(edge_count)
    for cell, c in counts.items():
        out[list(cell)] += c
    return out


def _marginal_comparison(counts: ResampleCounts, edge_count: int, significance: float) -> tuple[float, bool]:
    """Largest per-edge frequency gap and whether every edge passes a Bonferroni-corrected homogeneity test."""
    n = counts.replicas
    a = edge_marginals(counts.direct, edge_count)
    b = edge_marginals(counts.resampled, edge_count)
    gap = float(np.abs(a - b).max(initial=0.0) / n) if n else 0.0
    passed = True
    for e in range(edge_count):
        result = chi_square_two_sample({1: a[e], 0: n - a[e]}, {1: b[e], 0: n - b[e]}, significance=significance / max(edge_count, 1))
        passed &= result.passed
    return gap, passed


def analyse_resample_counts(
    counts: ResampleCounts,
    ball_edges: int,
    seed: int,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> ResampleReport:
    sig = settings.chi2_significance
    chi2 = chi_square_two_sample(counts.direct, counts.resampled, significance=sig, min_expected=settings.min_expected_count)
    gen = as_generator(RngStream(seed, 0, (BOOTSTRAP_STREAM,)))
    tv = tv_bootstrap(counts.direct, counts.resampled, gen, resamples=settings.bootstrap_resamples, significance=sig)
    pooled = counts.direct + counts.resampled
    n = counts.replicas
    # cells whose expected count per pipeline reaches the threshold
    dense_mass = sum(c for c in pooled.values() if c / 2 >= settings.min_expected_count)
    coarsened = dense_mass < 0.5 * 2 * n
    gap, marginal_ok = _marginal_comparison(counts, ball_edges, sig)
    if coarsened:
        log.warning("resample test: cells too sparse (%.1f%% of mass in dense cells); comparing edge marginals", 50.0 * dense_mass / max(n, 1))
    return ResampleReport(n, ball_edges, len(pooled), chi2, tv, coarsened, gap, marginal_ok, counts.partition_mismatches, counts)


def statistical_resample_test(
    spec: LatticeBoxSpec,
    ball_radius: int,
    replicas: int,
    seed: int,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> ResampleReport:
    """Pipeline A (WSF restricted to B) against pipeline B (resample through K); replica i uses RngStream(seed, i)."""
    if 4 * ball_radius > spec.radius:
        log.warning("ball radius %d is large relative to box radius %d; boundary effects may show", ball_radius, spec.radius)
    sampler = ResampleSampler(spec, ball_radius, settings=settings)
    counts = resample_counts(sampler, seed, 0, replicas)
    return analyse_resample_counts(counts, sampler.ball_graph.edge_count, seed, settings=settings)
