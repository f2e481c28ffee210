"""
forest_analysis.py - Rays, bushes, cut sets and resistance diagnostics of WSF trees

In a forest from wsf_wired_box, the root path of v is its ray: Ray(0) = v,
Ray(1), ... up to the tree's attachment to the wired boundary. Bush_n is the
part of the tree hanging off Ray(n). Every edge of G inside the tree joins two
bushes Bush_a, Bush_b (a <= b); all analyses here work from those (a, b)
pairs:

    N_{j,l} at n     edges with a = n - j, b = n + l
    C_k              edges with a <= k < b
    j(e)             b - a, the number of cut sets containing e
    J_k              sum of j(e) over C_k

The last `ray_margin` fraction of the ray sits next to the boundary and is
dropped from reported cut sets and profiles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import DomainError
from .forest import SpanningForest
from .graph import Graph, components
from .induced import InducedComponentGraph, induced_component_graph
from .lattice import Boundary, LatticeBoxSpec, build_lattice_box
from .resistance import CutSetFamily, effective_resistance
from .rng import RngStream, as_generator
from .stats import fit_envelope
from .walk.paths import Path
from .wilson import wsf_wired_box

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RayDecomposition:
    forest: SpanningForest
    ray: Path
    bush_index: np.ndarray
    truncation: int

    @property
    def ray_length(self) -> int:
        return self.ray.length

    def bush(self, n: int) -> np.ndarray:
        return np.flatnonzero(self.bush_index == n)

    def bushes(self) -> list[np.ndarray]:
        order = np.argsort(self.bush_index, kind="stable")
        inside = order[self.bush_index[order] >= 0]
        counts = np.bincount(self.bush_index[inside], minlength=self.ray_length + 1)
        return np.split(inside, np.cumsum(counts)[:-1])

    @cached_property
    def tree_mask(self) -> np.ndarray:
        return self.bush_index >= 0

    @cached_property
    def bush_pairs(self) -> np.ndarray:
        """(a, b) with a < b for every G-edge joining two different bushes, one row per edge."""
        return self.joining_edges[1]

    @cached_property
    def joining_edges(self) -> tuple[np.ndarray, np.ndarray]:
        edges = self.forest.graph.edges
        a = self.bush_index[edges[:, 0]]
        b = self.bush_index[edges[:, 1]]
        keep = (a >= 0) & (b >= 0) & (a != b)
        pairs = np.column_stack([np.minimum(a, b), np.maximum(a, b)])[keep]
        return np.flatnonzero(keep), pairs


def _truncation(ray_length: int, margin: float) -> int:
    return max(ray_length - math.ceil(margin * ray_length), 0)


def ray_decompose(forest: SpanningForest, v: int, *, settings: Settings = DEFAULT_SETTINGS) -> RayDecomposition:
    """Ray of v (its root path) and the bush of every vertex of v's tree."""
    ray = forest.path_to_root(v)
    bush = np.full(len(forest.parent), -1, dtype=np.int64)
    bush[ray] = np.arange(len(ray))
    parent = forest.parent
    labels = forest.components.labels
    for u in np.flatnonzero(labels == labels[v]).tolist():
        climb = []
        x = u
        while bush[x] < 0:
            climb.append(x)
            x = parent[x]
        if climb:
            bush[climb] = bush[x]
    return RayDecomposition(forest, Path(tuple(ray)), bush, _truncation(len(ray) - 1, settings.ray_margin))


@dataclass(frozen=True)
class JoinStatistics:
    n: int
    N: dict[tuple[int, int], int]

    def tail_sum(self, m: int, j_max: int | None = None) -> int:
        """sum over j <= j_max (default n), l >= m of N_{j,l}."""
        j_max = self.n if j_max is None else j_max
        return sum(c for (j, l), c in self.N.items() if j <= j_max and l >= m)


def join_counts(decomposition: RayDecomposition, n: int) -> JoinStatistics:
    """N_{j,l} = #edges joining Bush_{n-j} and Bush_{n+l}, 0 <= j <= n, l >= 1; ray edges included."""
    if not 0 <= n <= decomposition.ray_length:
        raise DomainError(f"n={n} outside 0..{decomposition.ray_length}")
    pairs = decomposition.bush_pairs
    sel = (pairs[:, 0] <= n) & (pairs[:, 1] > n)
    N: dict[tuple[int, int], int] = {}
    for a, b in pairs[sel].tolist():
        key = (n - a, b - n)
        N[key] = N.get(key, 0) + 1
    return JoinStatistics(n, N)


def tail_sum(decomposition: RayDecomposition, n: int, m: int) -> int:
    """sum_{0<=j<=n} sum_{l>=m} N_{j,l}: edges joining some Bush_a, a <= n, to some Bush_b, b >= n + m."""
    pairs = decomposition.bush_pairs
    return int(np.count_nonzero((pairs[:, 0] <= n) & (pairs[:, 1] >= n + m)))


@dataclass(frozen=True, eq=False)
class CutSetStatistics:
    cuts: list[np.ndarray]
    multiplicity: dict[int, int]
    J: np.ndarray

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.cuts], dtype=np.int64)

    def family(self) -> CutSetFamily:
        return CutSetFamily(c.tolist() for c in self.cuts)

    def lower_bounds(self) -> np.ndarray:
        """lower[n] = sum_{k<n} 1/J_k, n = 0..len(J)."""
        return np.concatenate([[0.0], np.cumsum(1.0 / self.J)])


def cut_sets_and_J(
    decomposition: RayDecomposition,
    *,
    validate: bool = True,
    induced: InducedComponentGraph | None = None,
) -> CutSetStatistics:
    """
    C_k for k < truncation, j(e) = b - a and J_k. With `validate`, checks in the
    induced-component graph of the forest that removing C_k cuts Ray(0..k) off
    from the whole ray tail Ray(k+1..end).
    """
    eids, pairs = decomposition.joining_edges
    K = decomposition.truncation
    cuts = [eids[(pairs[:, 0] <= k) & (pairs[:, 1] > k)] for k in range(K)]
    mult = dict(zip(eids.tolist(), (pairs[:, 1] - pairs[:, 0]).tolist()))
    J = np.array([sum(mult[e] for e in c.tolist()) for c in cuts], dtype=float)
    stats = CutSetStatistics(cuts, mult, J)
    if validate and K > 0:
        forest = decomposition.forest
        induced = induced or induced_component_graph(forest.graph, forest)
        ray = np.asarray(decomposition.ray.vertices, dtype=np.int64)
        for k, cut in enumerate(cuts):
            mask = induced.edge_mask.copy()
            mask[cut] = False
            labels = components(forest.graph, mask).labels
            if np.intersect1d(labels[ray[: k + 1]], labels[ray[k + 1 :]]).size:
                raise DomainError(f"cut set k={k} does not separate Ray(0..{k}) from the ray tail")
    return stats


def inter_component_joins(graph: Graph, forest: SpanningForest, u: int, v: int) -> int:
    """Edges of G with one endpoint in u's tree and the other in v's; 0 if they share a tree."""
    labels = forest.components.labels
    lu, lv = labels[u], labels[v]
    if lu == lv:
        return 0
    a = labels[graph.edges[:, 0]]
    b = labels[graph.edges[:, 1]]
    return int(np.count_nonzero(((a == lu) & (b == lv)) | ((a == lv) & (b == lu))))


@dataclass(frozen=True)
class GrowthRow:
    n: int
    resistance: float
    lower_bound: float


def resistance_growth_profile(
    graph: Graph,
    forest: SpanningForest,
    v: int,
    n_max: int | None = None,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> list[GrowthRow]:
    """(n, R_eff(v, Ray(n)) in the induced-component graph, sum_{k<n} 1/J_k) for n = 1..n_max."""
    decomposition = ray_decompose(forest, v, settings=settings)
    induced = induced_component_graph(graph, forest)
    stats = cut_sets_and_J(decomposition, validate=False)
    lower = stats.lower_bounds()
    n_max = decomposition.truncation if n_max is None else min(n_max, decomposition.truncation)
    ray = decomposition.ray
    rows = []
    for n in range(1, n_max + 1):
        R = effective_resistance(graph, v, ray[n], edge_mask=induced.edge_mask, settings=settings)
        rows.append(GrowthRow(n, R, float(lower[n])))
    return rows


def geometric_cut_sizes(decomposition: RayDecomposition, base: float = 2.0) -> list[tuple[int, int]]:
    """(n_k, #C_{n_k}) along geometric ray indices n_k = base^k below the truncation."""
    eids, pairs = decomposition.joining_edges
    out = []
    k = 0
    while True:
        n = int(round(base**k))
        if n >= decomposition.truncation:
            break
        if not out or n != out[-1][0]:
            out.append((n, int(np.count_nonzero((pairs[:, 0] <= n) & (pairs[:, 1] > n)))))
        k += 1
    return out


@dataclass(frozen=True)
class RecurrenceRow:
    radius: int
    resistance: float
    cut_partial_sums: tuple[float, ...]
    cut_indices: tuple[int, ...]
    ray_length: int


def recurrence_diagnostic(
    dimension: int,
    radii: Iterable[int],
    rng: RngStream | np.random.Generator,
    *,
    point: Sequence[int] | None = None,
    base: float = 2.0,
    settings: Settings = DEFAULT_SETTINGS,
) -> list[RecurrenceRow]:
    """
    Per radius: resistance within the induced-component graph from v to the end of its ray on the box
    boundary, and partial sums of 1/#C_{n_k} along geometric ray indices.
    """
    gen = as_generator(rng)
    rows = []
    for r in radii:
        spec = LatticeBoxSpec(dimension, r, Boundary.WIRED)
        graph = build_lattice_box(spec, settings=settings)
        v = spec.origin if point is None else spec.vertex_id(point)
        forest = wsf_wired_box(spec, gen, graph=graph, settings=settings)
        decomposition = ray_decompose(forest, v, settings=settings)
        end = decomposition.ray[-1]
        if end == v:
            R = 0.0
        else:
            induced = induced_component_graph(graph, forest)
            R = effective_resistance(graph, v, end, edge_mask=induced.edge_mask, settings=settings)
        sizes = geometric_cut_sizes(decomposition, base)
        partial = np.cumsum([1.0 / s if s else float("inf") for _, s in sizes])
        rows.append(RecurrenceRow(r, R, tuple(partial.tolist()), tuple(n for n, _ in sizes), decomposition.ray_length))
        log.debug("recurrence diagnostic r=%d: R=%.4f, ray length %d", r, R, decomposition.ray_length)
    return rows


@dataclass(frozen=True)
class EnvelopeReport:
    constant: float
    residuals: tuple[float, ...]
    monotone_in_m: bool
    points: tuple[tuple[int, int, float], ...]

    def as_dict(self) -> dict:
        return {
            "constant": self.constant,
            "residuals": list(self.residuals),
            "monotone_in_m": self.monotone_in_m,
            "points": [list(p) for p in self.points],
        }


def mean_tail_grid(decompositions: Sequence[RayDecomposition], grid: Iterable[tuple[int, int]]) -> dict[tuple[int, int], float]:
    """Mean over forests of tail_sum(n, m) at each grid point."""
    return {(n, m): float(np.mean([tail_sum(d, n, m) for d in decompositions])) for n, m in grid}


def linear_envelope_check(means: Mapping[tuple[int, int], float]) -> EnvelopeReport:
    """Fit mean tail sums over n < m against C * n / m; check they do not increase in m at fixed n."""
    grid = sorted((n, m) for n, m in means if n < m)
    xs = [n / m for n, m in grid]
    ys = [means[nm] for nm in grid]
    C, resid = fit_envelope(xs, ys)
    monotone = True
    for (n, m), (n2, m2) in zip(grid, grid[1:]):
        if n == n2 and means[(n2, m2)] > means[(n, m)] + 1e-12:
            monotone = False
    return EnvelopeReport(C, tuple(resid.tolist()), monotone, tuple((n, m, means[(n, m)]) for n, m in grid))


def log_envelope_grid(grid: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Every (xi, m) with n <= xi <= 2n that log_envelope_check reads for the (n, m) in `grid`."""
    return sorted({(xi, m) for n, m in grid for xi in range(n, 2 * n + 1)})


def log_envelope_check(means: Mapping[tuple[int, int], float], grid: Iterable[tuple[int, int]]) -> EnvelopeReport:
    """Fit min over xi in [n, 2n] of the mean tail sum at (xi, m) against C * log((2n + m) / m)."""
    grid = sorted(grid)
    xs, ys, points = [], [], []
    for n, m in grid:
        y = min(means[(xi, m)] for xi in range(n, 2 * n + 1))
        xs.append(math.log((2 * n + m) / m))
        ys.append(y)
        points.append((n, m, y))
    C, resid = fit_envelope(xs, ys)
    by_n: dict[int, list[float]] = {}
    for n, _, y in points:
        by_n.setdefault(n, []).append(y)
    monotone = all(all(b <= a + 1e-12 for a, b in zip(ys_n, ys_n[1:])) for ys_n in by_n.values())
    return EnvelopeReport(C, tuple(resid.tolist()), monotone, tuple(points))
