"""
resistance.py - Effective resistance on unit-conductance multigraphs

Dirichlet solves (potential 1 on A, 0 on B) give the effective resistance as
the reciprocal of the minimal energy. Alongside the solver live the two
classical bounds used to certify it: the Nash-Williams lower bound from a
family of cut sets with multiplicities, and the Thomson upper bound from the
energy of any unit flow.

Only components that contain both A and B carry current. If none does, the
resistance is +inf.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
import scipy.linalg
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .config import DEFAULT_SETTINGS, Settings
from .errors import DomainError
from .graph import Graph, components
from .lattice import Boundary, LatticeBoxSpec, build_lattice_box

log = logging.getLogger(__name__)

VertexSet = int | Iterable[int]


def _as_set(vertices: VertexSet) -> frozenset[int]:
    if isinstance(vertices, (int, np.integer)):
        return frozenset([int(vertices)])
    return frozenset(int(v) for v in vertices)


def _check_terminals(graph: Graph, A: frozenset[int], B: frozenset[int]) -> None:
    if not A or not B:
        raise DomainError("A and B must be nonempty")
    if A & B:
        raise DomainError(f"A and B overlap at {sorted(A & B)[:5]}")
    for v in A | B:
        if not 0 <= v < graph.vertex_count:
            raise DomainError(f"vertex {v} is not in the graph")


def energy(f: Sequence[float] | np.ndarray, graph: Graph, edge_mask: np.ndarray | None = None) -> float:
    """Sum over (masked) edges of (f(x) - f(y))^2; parallel edges count separately."""
    f = np.asarray(f, dtype=float)
    if len(f) != graph.vertex_count:
        raise DomainError(f"f has {len(f)} values, graph has {graph.vertex_count} vertices")
    edges = graph.edges if edge_mask is None else graph.edges[np.asarray(edge_mask, dtype=bool)]
    gaps = f[edges[:, 0]] - f[edges[:, 1]]
    return float(gaps @ gaps)


@dataclass(frozen=True, eq=False)
class PotentialField:
    values: np.ndarray
    boundary_A: frozenset[int]
    boundary_B: frozenset[int]
    edge_mask: np.ndarray | None
    connected: bool

    def harmonic_residual(self, graph: Graph) -> float:
        """max |L f| / degree over vertices outside A and B."""
        lap = graph.laplacian(self.edge_mask)
        resid = np.abs(lap @ self.values)
        deg = np.maximum(lap.diagonal(), 1.0)
        free = np.ones(graph.vertex_count, dtype=bool)
        free[list(self.boundary_A | self.boundary_B)] = False
        return float((resid / deg)[free].max(initial=0.0))


def _solve_spd(matrix: sps.csr_matrix, rhs: np.ndarray, settings: Settings) -> np.ndarray:
    n = matrix.shape[0]
    if n == 0:
        return np.zeros(0)
    if n <= settings.dense_solver_cutoff:
        return scipy.linalg.solve(matrix.toarray(), rhs, assume_a="pos")
    inv_diag = 1.0 / matrix.diagonal()
    jacobi = spla.LinearOperator((n, n), matvec=lambda x: inv_diag * x)
    x, info = spla.cg(matrix, rhs, rtol=settings.cg_rtol, atol=0.0, maxiter=20 * n, M=jacobi)
    if info != 0:
        log.warning("CG did not converge (info=%d) on %d unknowns; falling back to a direct solve", info, n)
        x = spla.spsolve(matrix.tocsc(), rhs)
    return x


def solve_potential(
    graph: Graph,
    A: VertexSet,
    B: VertexSet,
    *,
    edge_mask: np.ndarray | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> PotentialField:
    """Harmonic f with f = 1 on A, f = 0 on B, on the (masked) graph."""
    A, B = _as_set(A), _as_set(B)
    _check_terminals(graph, A, B)
    n = graph.vertex_count
    labels = components(graph, edge_mask).labels
    values = np.zeros(n)
    a_idx, b_idx = sorted(A), sorted(B)
    live = np.intersect1d(labels[a_idx], labels[b_idx])
    # components touching only A sit at potential 1
    values[np.isin(labels, np.setdiff1d(labels[a_idx], live))] = 1.0
    values[a_idx] = 1.0
    if len(live) == 0:
        return PotentialField(values, A, B, edge_mask, False)

    free = np.isin(labels, live)
    free[a_idx] = False
    free[b_idx] = False
    free_idx = np.flatnonzero(free)
    lap = graph.laplacian(edge_mask)
    L_ff = lap[free_idx][:, free_idx].tocsr()
    rhs = -np.asarray(lap[free_idx][:, a_idx].sum(axis=1)).ravel()
    values[free_idx] = _solve_spd(L_ff, rhs, settings)
    return PotentialField(values, A, B, edge_mask, True)


def effective_resistance(
    graph: Graph,
    A: VertexSet,
    B: VertexSet,
    *,
    edge_mask: np.ndarray | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> float:
    field = solve_potential(graph, A, B, edge_mask=edge_mask, settings=settings)
    if not field.connected:
        return float("inf")
    return 1.0 / energy(field.values, graph, edge_mask)


def wired_effective_resistance(
    dimension: int,
    radii: Iterable[int],
    x: Sequence[int],
    y: Sequence[int],
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> list[tuple[int, float]]:
    """
    (radius, R_eff(x, y)) in the wired box of each radius. The wired vertex is
    an ordinary vertex of the finite graph, so no constraint is imposed there.
    By the shorting law the sequence is nondecreasing in the radius.
    """
    out = []
    for r in radii:
        spec = LatticeBoxSpec(dimension, r, Boundary.WIRED)
        xi, yi = spec.vertex_id(x), spec.vertex_id(y)
        graph = build_lattice_box(spec, settings=settings)
        value = effective_resistance(graph, xi, yi, settings=settings)
        log.debug("wired resistance d=%d r=%d: %.12f", dimension, r, value)
        out.append((r, value))
    return out


@dataclass(frozen=True)
class CutSetFamily:
    cuts: tuple[frozenset[int], ...]

    def __init__(self, cuts: Iterable[Iterable[int]]):
        object.__setattr__(self, "cuts", tuple(frozenset(int(e) for e in c) for c in cuts))

    def __len__(self) -> int:
        return len(self.cuts)

    @cached_property
    def multiplicity(self) -> Counter:
        """j(e) = number of cuts containing e."""
        j: Counter = Counter()
        for cut in self.cuts:
            j.update(cut)
        return j

    def weights(self) -> list[int]:
        """J_k = sum over e in C_k of j(e)."""
        j = self.multiplicity
        return [sum(j[e] for e in cut) for cut in self.cuts]

    def validate(self, graph: Graph, A: VertexSet, B: VertexSet, *, edge_mask: np.ndarray | None = None) -> None:
        A, B = _as_set(A), _as_set(B)
        base = np.ones(graph.edge_count, dtype=bool) if edge_mask is None else np.asarray(edge_mask, dtype=bool)
        a_idx, b_idx = sorted(A), sorted(B)
        for k, cut in enumerate(self.cuts):
            mask = base.copy()
            mask[list(cut)] = False
            labels = components(graph, mask).labels
            if np.intersect1d(labels[a_idx], labels[b_idx]).size:
                raise DomainError(f"cut set k={k} does not separate A from B")


def nash_williams_lower_bound(
    graph: Graph,
    A: VertexSet,
    B: VertexSet,
    family: CutSetFamily,
    *,
    edge_mask: np.ndarray | None = None,
    conductance: float = 1.0,
) -> float:
    """sum_k (sum_{e in C_k} j(e) c(e))^-1 for a validated family."""
    if conductance != 1.0:
        raise DomainError("only unit conductances are supported")
    family.validate(graph, A, B, edge_mask=edge_mask)
    total = 0.0
    for J in family.weights():
        total += float("inf") if J == 0 else 1.0 / (J * conductance)
    return total


@dataclass(frozen=True, eq=False)
class UnitFlow:
    """flow[e] runs from edges[e][0] to edges[e][1]; negative values run backwards."""

    flow: np.ndarray

    def divergence(self, graph: Graph) -> np.ndarray:
        flow = np.asarray(self.flow, dtype=float)
        out = np.zeros(graph.vertex_count)
        np.add.at(out, graph.edges[:, 0], flow)
        np.subtract.at(out, graph.edges[:, 1], flow)
        return out

    def violation(self, graph: Graph, A: VertexSet, B: VertexSet) -> float:
        A, B = _as_set(A), _as_set(B)
        div = self.divergence(graph)
        inner = np.ones(graph.vertex_count, dtype=bool)
        inner[list(A | B)] = False
        worst = float(np.abs(div[inner]).max(initial=0.0))
        worst = max(worst, abs(div[sorted(A)].sum() - 1.0), abs(div[sorted(B)].sum() + 1.0))
        return worst

    def validate(self, graph: Graph, A: VertexSet, B: VertexSet, tol: float = 1e-9) -> None:
        if len(self.flow) != graph.edge_count:
            raise DomainError(f"flow has {len(self.flow)} entries, graph has {graph.edge_count} edges")
        worst = self.violation(graph, A, B)
        if worst > tol:
            raise DomainError(f"flow conservation violated: max violation {worst:.3e}")

    def energy(self) -> float:
        flow = np.asarray(self.flow, dtype=float)
        return float(flow @ flow)


def thomson_upper_bound(graph: Graph, A: VertexSet, B: VertexSet, flow: UnitFlow, tol: float = 1e-9) -> float:
    flow.validate(graph, A, B, tol)
    return flow.energy()


def current_flow(
    graph: Graph,
    A: VertexSet,
    B: VertexSet,
    *,
    edge_mask: np.ndarray | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> UnitFlow:
    """The unit current flow from A to B (the energy minimizer among unit flows)."""
    field = solve_potential(graph, A, B, edge_mask=edge_mask, settings=settings)
    if not field.connected:
        raise DomainError("A and B are not connected; no unit flow exists")
    f = field.values
    R = 1.0 / energy(f, graph, edge_mask)
    flow = (f[graph.edges[:, 0]] - f[graph.edges[:, 1]]) * R
    if edge_mask is not None:
        flow[~np.asarray(edge_mask, dtype=bool)] = 0.0
    return UnitFlow(flow)


def path_flow(graph: Graph, path: Sequence[int], amount: float = 1.0) -> np.ndarray:
    """Edge flow of `amount` sent along a vertex path."""
    flow = np.zeros(graph.edge_count)
    for u, v in zip(path, path[1:]):
        e = graph.edge_between(u, v)
        flow[e] += amount if graph.edges[e][0] == u else -amount
    return flow


def local_modification_gap(
    H: Graph,
    H2: Graph,
    pairs: Iterable[tuple[int, int]],
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> float:
    """max over vertex pairs of R_eff^H(u, v) - R_eff^H2(u, v)."""
    worst = -float("inf")
    for u, v in pairs:
        for w in (u, v):
            if not (0 <= w < H.vertex_count and 0 <= w < H2.vertex_count):
                raise DomainError(f"vertex {w} is not in both graphs")
        gap = effective_resistance(H, u, v, settings=settings) - effective_resistance(H2, u, v, settings=settings)
        worst = max(worst, gap)
    return worst


def series_parallel_resistance(graph: Graph, a: int, b: int) -> float:
    """
    Resistance by repeated series and parallel merges (and removal of dangling
    vertices). DomainError if the network does not reduce to a single a-b edge.
    """
    if a == b:
        raise DomainError("A and B overlap")
    net = nx.Graph()
    net.add_nodes_from(range(graph.vertex_count))
    for u, v in graph.edges.tolist():
        if net.has_edge(u, v):
            r = net[u][v]["r"]
            net[u][v]["r"] = r / (r + 1.0)
        else:
            net.add_edge(u, v, r=1.0)
    keep = nx.node_connected_component(net, a)
    if b not in keep:
        return float("inf")
    net = net.subgraph(keep).copy()

    changed = True
    while changed:
        changed = False
        for x in list(net.nodes):
            if x in (a, b):
                continue
            deg = net.degree(x)
            if deg == 1:
                net.remove_node(x)
                changed = True
            elif deg == 2:
                (p, rp), (q, rq) = ((y, net[x][y]["r"]) for y in net[x])
                net.remove_node(x)
                r = rp + rq
                if net.has_edge(p, q):
                    old = net[p][q]["r"]
                    r = old * r / (old + r)
                net.add_edge(p, q, r=r)
                changed = True
    if set(net.nodes) != {a, b}:
        raise DomainError("network is not series-parallel reducible between the terminals")
    return float(net[a][b]["r"])


def kirchhoff_edge_probabilities(
    graph: Graph,
    edge_ids: Iterable[int],
    *,
    edge_mask: np.ndarray | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> np.ndarray:
    """P[e in UST] = R_eff(x, y) for each unit-conductance edge e = (x, y)."""
    out = []
    for e in edge_ids:
        x, y = graph.edges[e].tolist()
        out.append(effective_resistance(graph, x, y, edge_mask=edge_mask, settings=settings))
    return np.array(out)
