"""
wilson.py - Wilson's algorithm and the samplers built on it

Wilson's algorithm grows a tree from a root set: pick a vertex outside the
tree, run a random walk until it hits the tree, and attach the loop erasure of
that walk. The walk is stored as a successor table (the exit taken on the last
visit to each vertex), which is exactly the loop erasure once the walk stops.

Samplers:
    wilson_ust          uniform spanning tree (or forest rooted at a root set)
    wsf_wired_box       wired spanning forest of a lattice box
    wsf_ball_edges      WSF edges inside a ball, growing branches from the ball only
    two_sided_wsf       WSF with a two-sided LERW trunk as the first branch
    coupling_attempt
                        the same object via a walk W from o and event B
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import ContractViolation, DomainError, StatisticalFailure, StepBudgetExceeded
from .forest import SpanningForest
from .graph import Graph, components
from .lattice import Boundary, LatticeBoxSpec, build_lattice_box
from .rng import RngStream, UniformBuffer, as_generator
from .walk.loop_erasure import loop_erase
from .walk.paths import Path
from .walk.srw import HitWired, run_srw
from .walk.two_sided import two_sided_lerw

log = logging.getLogger(__name__)


def _unset() -> int:
    return -1


class _WilsonState:
    """Mutable parent table shared by the branches of one Wilson run."""

    def __init__(
        self,
        graph: Graph,
        rng: RngStream | np.random.Generator,
        edge_mask: np.ndarray | None,
        settings: Settings,
        sparse: bool = False,
    ):
        self.graph = graph
        self.adj, self.inc = graph.adjacency_lists(edge_mask)
        self.buf = UniformBuffer(as_generator(rng))
        n = graph.vertex_count
        if sparse:
            # branches that touch few vertices of a large graph
            self.in_tree = defaultdict(bool)
            self.parent = defaultdict(_unset)
            self.parent_edge = defaultdict(_unset)
            self._next = {}
            self._next_edge = {}
        else:
            self.in_tree = [False] * n
            self.parent = [-1] * n
            self.parent_edge = [-1] * n
            self._next = [-1] * n
            self._next_edge = [-1] * n
        self.step_cap = settings.step_budget

    def add_roots(self, roots: Iterable[int]) -> None:
        for r in roots:
            self.in_tree[r] = True

    def attach_path(self, vertices: list[int], edges: list[int]) -> None:
        """Fix a ready-made branch: vertices[i] gets parent vertices[i+1]."""
        for i, v in enumerate(vertices[:-1]):
            self.in_tree[v] = True
            self.parent[v] = vertices[i + 1]
            self.parent_edge[v] = edges[i]

    def branch(self, start: int) -> None:
        in_tree, adj, inc = self.in_tree, self.adj, self.inc
        nxt, nxt_edge = self._next, self._next_edge
        choice = self.buf.choice
        u = start
        steps = 0
        while not in_tree[u]:
            nbrs = adj[u]
            if not nbrs:
                raise DomainError(f"vertex {u} is isolated and not a root")
            k = choice(len(nbrs))
            nxt[u] = nbrs[k]
            nxt_edge[u] = inc[u][k]
            u = nbrs[k]
            steps += 1
            if steps > self.step_cap:
                raise StepBudgetExceeded(self.step_cap)
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            self.parent[u] = nxt[u]
            self.parent_edge[u] = nxt_edge[u]
            u = nxt[u]

    def grow(self, order: Iterable[int]) -> None:
        for v in order:
            self.branch(v)


def _root_set(root: int | Iterable[int]) -> list[int]:
    if isinstance(root, (int, np.integer)):
        return [int(root)]
    return sorted({int(r) for r in root})


def wilson_ust(
    graph: Graph,
    root: int | Iterable[int],
    rng: RngStream | np.random.Generator,
    *,
    order: Iterable[int] | None = None,
    edge_mask: np.ndarray | None = None,
    vertices: np.ndarray | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> SpanningForest:
    """
    Uniform spanning tree of `graph` rooted at `root`; with a root set, the
    uniform spanning forest in which every tree contains exactly one root
    (the UST of the graph with the roots identified). `edge_mask` and
    `vertices` restrict the host graph.
    """
    n = graph.vertex_count
    covered = np.ones(n, dtype=bool) if vertices is None else np.asarray(vertices, dtype=bool)
    roots = _root_set(root)
    if not roots:
        raise DomainError("at least one root is required")
    for r in roots:
        if not covered[r]:
            raise ContractViolation(f"root {r} is not in the vertex set")
    comp = components(graph, edge_mask, covered)
    rooted = {int(comp.labels[r]) for r in roots}
    if len(rooted) < comp.component_count:
        orphan = next(lab for lab in range(comp.component_count) if lab not in rooted)
        raise DomainError(f"graph is disconnected: component of vertex {int(comp.members(orphan)[0])} has no root")

    covered_ids = np.flatnonzero(covered).tolist()
    if order is None:
        order = covered_ids
    else:
        order = [int(v) for v in order]
        if sorted(order) != covered_ids:
            raise ContractViolation("order must enumerate every vertex exactly once")

    mask = edge_mask
    if vertices is not None:
        inside = covered[graph.edges[:, 0]] & covered[graph.edges[:, 1]]
        mask = inside if edge_mask is None else (np.asarray(edge_mask, dtype=bool) & inside)
    state = _WilsonState(graph, rng, mask, settings)
    state.add_roots(roots)
    state.grow(order)
    return SpanningForest(graph, np.array(state.parent), np.array(state.parent_edge), covered, tuple(roots))


def _drop_wired(graph: Graph, parent: list[int], parent_edge: list[int], covered: np.ndarray, extra_roots: Iterable[int] = ()) -> SpanningForest:
    """Delete the wired vertex: its children become roots of their trees."""
    w = graph.wired_vertex
    parent = np.array(parent, dtype=np.int64)
    parent_edge = np.array(parent_edge, dtype=np.int64)
    attached = np.flatnonzero(parent == w)
    parent[attached] = -1
    parent_edge[attached] = -1
    covered = covered.copy()
    covered[w] = False
    parent[w] = parent_edge[w] = -1
    roots = sorted(set(attached.tolist()) | set(extra_roots))
    return SpanningForest(graph, parent, parent_edge, covered, tuple(roots))


def _wired_graph(spec: LatticeBoxSpec, graph: Graph | None, settings: Settings) -> Graph:
    if spec.boundary is not Boundary.WIRED:
        raise DomainError("a wired spanning forest needs a wired box")
    return build_lattice_box(spec, settings=settings) if graph is None else graph


def wsf_wired_box(
    spec: LatticeBoxSpec,
    rng: RngStream | np.random.Generator,
    *,
    graph: Graph | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> SpanningForest:
    """
    WSF of the box: UST of the wired graph rooted at the wired vertex, with the
    wired vertex removed. Each tree's root is its former attachment to the
    wired vertex, so the root path of v is v's ray toward the boundary.
    """
    graph = _wired_graph(spec, graph, settings)
    w = graph.wired_vertex
    state = _WilsonState(graph, rng, None, settings)
    state.add_roots([w])
    state.grow(range(graph.vertex_count))
    return _drop_wired(graph, state.parent, state.parent_edge, np.ones(graph.vertex_count, dtype=bool))


def wsf_ball_edges(
    graph: Graph,
    ball: Iterable[int],
    rng: RngStream | np.random.Generator,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> tuple[int, ...]:
    """
    Sorted edge ids of WSF restricted to `ball` (edges with both endpoints in it).

    Every such edge is the parent edge of a ball vertex, and by order
    independence Wilson may start with the ball vertices, so the rest of the
    forest never has to be sampled.
    """
    if graph.wired_vertex is None:
        raise DomainError("wsf_ball_edges needs a wired graph")
    ball = [int(v) for v in ball]
    inside = np.zeros(graph.vertex_count, dtype=bool)
    inside[ball] = True
    state = _WilsonState(graph, rng, None, settings, sparse=True)
    state.add_roots([graph.wired_vertex])
    state.grow(ball)
    out = []
    for v in ball:
        p = state.parent[v]
        if p >= 0 and inside[p]:
            out.append(state.parent_edge[v])
    return tuple(sorted(out))


@dataclass(frozen=True, eq=False)
class TwoSidedWsfSample:
    forest: SpanningForest
    trunk: Path
    origin_edge: int | None = None
    clipped: bool = False
    attempts: int = 1
    metadata: dict = field(default_factory=dict)

    @property
    def origin(self) -> int:
        return int(self.trunk.at(0))


def _box_lerw_branch(graph: Graph, start: int, rng: np.random.Generator, settings: Settings) -> tuple[list[int], list[int]]:
    walk = run_srw(graph, start, HitWired(), rng, settings=settings)
    return list(walk.vertices), list(loop_erase(walk).vertices)


def _box_trunk(spec: LatticeBoxSpec, graph: Graph, gen: np.random.Generator, settings: Settings) -> tuple[list[int], int, int]:
    """Two-sided LERW inside the wired box: walks run until they hit the wired vertex."""
    o, w = spec.origin, graph.wired_vertex
    for attempt in range(1, settings.attempt_cap + 1):
        _, le1 = _box_lerw_branch(graph, o, gen, settings)
        s2, le2 = _box_lerw_branch(graph, o, gen, settings)
        on_le1 = set(le1) - {w}
        if any(v in on_le1 for v in s2[1:]):
            continue
        negative = [v for v in reversed(le2) if v != w]
        positive = [v for v in le1[1:] if v != w]
        return negative + positive, len(negative) - 1, attempt
    raise StatisticalFailure(settings.attempt_cap, "box two-sided LERW")


def _lattice_trunk(spec: LatticeBoxSpec, horizon: int, gen: np.random.Generator, settings: Settings) -> tuple[list[int], int, int, bool]:
    """Two-sided LERW on Z^d clipped to the maximal in-box run through the origin."""
    sample = two_sided_lerw(spec.dimension, horizon, gen, settings=settings)
    points = sample.path.vertices
    at = sample.path.origin_offset
    lo = at
    while lo > 0 and spec.contains(points[lo - 1]):
        lo -= 1
    hi = at
    while hi < len(points) - 1 and spec.contains(points[hi + 1]):
        hi += 1
    clipped = lo > 0 or hi < len(points) - 1
    return [spec.vertex_id(p) for p in points[lo : hi + 1]], at - lo, sample.attempts, clipped


def two_sided_wsf(
    spec: LatticeBoxSpec,
    rng: RngStream | np.random.Generator,
    *,
    horizon: int | None = None,
    trunk_source: Literal["lattice", "box"] = "lattice",
    graph: Graph | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoSidedWsfSample:
    """
    Two-sided WSF on a wired box: the trunk (a two-sided LERW trace through
    the origin) is laid down first and acts as one root, then ordinary Wilson
    rooted at {trunk, wired vertex} fills in the rest.

    trunk_source="lattice" samples the trunk on Z^d and clips it to the box;
    "box" samples both walks inside the wired box until they reach the wired
    vertex.
    """
    if spec.dimension < 5:
        raise DomainError(f"d={spec.dimension}: the two-sided LERW trunk requires d >= 5")
    graph = _wired_graph(spec, graph, settings)
    gen = as_generator(rng)
    horizon = settings.horizon if horizon is None else horizon
    if trunk_source == "lattice":
        trunk, offset, attempts, clipped = _lattice_trunk(spec, horizon, gen, settings)
    elif trunk_source == "box":
        trunk, offset, attempts = _box_trunk(spec, graph, gen, settings)
        clipped = False
    else:
        raise DomainError(f"unknown trunk source {trunk_source!r}")
    if clipped:
        log.debug("trunk clipped to %d vertices in box radius %d", len(trunk), spec.radius)

    state = _WilsonState(graph, gen, None, settings)
    state.add_roots([graph.wired_vertex, trunk[-1]])
    state.attach_path(trunk, [graph.edge_between(a, b) for a, b in zip(trunk, trunk[1:])])
    state.grow(range(graph.vertex_count))
    forest = _drop_wired(graph, state.parent, state.parent_edge, np.ones(graph.vertex_count, dtype=bool), [trunk[-1]])
    return TwoSidedWsfSample(
        forest=forest,
        trunk=Path(tuple(trunk), offset),
        clipped=clipped,
        attempts=attempts,
        metadata={"trunk_source": trunk_source, "trunk_length": len(trunk) - 1},
    )


def coupling_attempt(
    spec: LatticeBoxSpec,
    rng: RngStream | np.random.Generator,
    *,
    graph: Graph | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoSidedWsfSample | None:
    """
    One run of the coupling: S^1 from o is the first Wilson branch; a walk W
    from o stops at its first vertex off LE[S^1], called v; v starts the
    second branch; the rest is ordinary Wilson. Returns None unless event B
    holds (W leaves LE[S^1] at step 1 and v's tree differs from o's); on B the
    forest gains the edge (o, v).
    """
    graph = _wired_graph(spec, graph, settings)
    gen = as_generator(rng)
    o, w = spec.origin, graph.wired_vertex
    state = _WilsonState(graph, gen, None, settings)
    state.add_roots([w])
    state.branch(o)
    ray_o = [o]
    while state.parent[ray_o[-1]] != w:
        ray_o.append(state.parent[ray_o[-1]])
    on_ray = set(ray_o)

    adj, inc = state.adj, state.inc
    k = state.buf.choice(len(adj[o]))
    v, e_ov = adj[o][k], inc[o][k]
    if v == w or v in on_ray:
        return None
    state.branch(v)
    branch_v = [v]
    while branch_v[-1] != w and branch_v[-1] not in on_ray:
        branch_v.append(state.parent[branch_v[-1]])
    if branch_v[-1] != w:
        return None
    state.grow(range(graph.vertex_count))
    forest = _drop_wired(graph, state.parent, state.parent_edge, np.ones(graph.vertex_count, dtype=bool))
    joined = SpanningForest.from_edge_ids(graph, [*forest.edge_ids.tolist(), e_ov], forest.vertices)
    negative = branch_v[-2::-1]
    trunk = Path(tuple(negative + ray_o), len(negative))
    return TwoSidedWsfSample(forest=joined, trunk=trunk, origin_edge=e_ov, metadata={"v": v})


def coupling_sample(
    spec: LatticeBoxSpec,
    rng: RngStream | np.random.Generator,
    *,
    graph: Graph | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoSidedWsfSample:
    """Repeat coupling_attempt until event B holds."""
    graph = _wired_graph(spec, graph, settings)
    gen = as_generator(rng)
    for attempt in range(1, settings.attempt_cap + 1):
        sample = coupling_attempt(spec, gen, graph=graph, settings=settings)
        if sample is not None:
            return TwoSidedWsfSample(sample.forest, sample.trunk, sample.origin_edge, attempts=attempt, metadata=sample.metadata)
    raise StatisticalFailure(settings.attempt_cap, "coupling event B")


def origin_ball_key(sample: TwoSidedWsfSample | SpanningForest, spec: LatticeBoxSpec, radius: int = 1) -> tuple[int, ...]:
    """Edge ids of the origin's component with both endpoints in the l1 ball of `radius`."""
    forest = sample.forest if isinstance(sample, TwoSidedWsfSample) else sample
    ball = np.zeros(forest.graph.vertex_count, dtype=bool)
    ball[spec.ball(radius)] = True
    labels = forest.components.labels
    mine = labels == labels[spec.origin]
    ends = forest.graph.edges[forest.edge_ids]
    keep = ball[ends[:, 0]] & ball[ends[:, 1]] & mine[ends[:, 0]] & mine[ends[:, 1]]
    return tuple(forest.edge_ids[keep].tolist())
