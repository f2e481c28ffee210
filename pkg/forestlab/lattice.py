"""
lattice.py - Boxes of Z^d with wired or free boundary, and the two-copy graph

Box points {-r..r}^d map to ids by mixed-radix encoding (np.ravel_multi_index,
first coordinate most significant). A wired box appends one extra vertex that
stands for every lattice point outside the box; each boundary incidence
becomes its own edge to it, so corners carry parallel edges.

Usage:
    spec = LatticeBoxSpec(dimension=2, radius=1, boundary=Boundary.WIRED)
    graph = build_lattice_box(spec)      # 10 vertices, 24 edges
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .errors import ContractViolation, DomainError, ResourceError
from .graph import Graph

log = logging.getLogger(__name__)


class Boundary(enum.Enum):
    WIRED = "wired"
    FREE = "free"


@dataclass(frozen=True)
class LatticeBoxSpec:
    dimension: int
    radius: int
    boundary: Boundary = Boundary.WIRED

    def __post_init__(self):
        if self.dimension < 1:
            raise ContractViolation(f"dimension must be >= 1, got {self.dimension}")
        if self.radius < 1:
            raise ContractViolation(f"radius must be >= 1, got {self.radius}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.side,) * self.dimension

    @property
    def box_vertex_count(self) -> int:
        return self.side**self.dimension

    @property
    def vertex_count(self) -> int:
        return self.box_vertex_count + (1 if self.boundary is Boundary.WIRED else 0)

    @property
    def wired_vertex(self) -> int | None:
        return self.box_vertex_count if self.boundary is Boundary.WIRED else None

    @property
    def origin(self) -> int:
        return self.vertex_id((0,) * self.dimension)

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.dimension and all(abs(int(x)) <= self.radius for x in point)

    def vertex_id(self, point: Sequence[int]) -> int:
        if not self.contains(point):
            raise DomainError(f"point {tuple(point)} lies outside the box of radius {self.radius}")
        return int(np.ravel_multi_index(tuple(int(x) + self.radius for x in point), self.shape))

    def point(self, vertex: int) -> tuple[int, ...]:
        if not 0 <= vertex < self.box_vertex_count:
            raise DomainError(f"vertex {vertex} is not a box point")
        return tuple(int(c) - self.radius for c in np.unravel_index(vertex, self.shape))

    def coordinates(self) -> np.ndarray:
        """(box_vertex_count, d) array of the box points in id order."""
        grid = np.indices(self.shape).reshape(self.dimension, -1).T
        return grid - self.radius

    def ball(self, radius: int) -> np.ndarray:
        """Box ids within graph (l1) distance `radius` of the origin."""
        return np.flatnonzero(np.abs(self.coordinates()).sum(axis=1) <= radius)

    def boundary_vertices(self) -> np.ndarray:
        """Box ids with a neighbour outside the box."""
        return np.flatnonzero(np.abs(self.coordinates()).max(axis=1) == self.radius)

    def with_radius(self, radius: int) -> LatticeBoxSpec:
        return LatticeBoxSpec(self.dimension, radius, self.boundary)


def _check_budget(requested: int, settings: Settings) -> None:
    if requested > settings.vertex_budget:
        raise ResourceError("vertex", requested, settings.vertex_budget)


def build_lattice_box(spec: LatticeBoxSpec, *, settings: Settings = DEFAULT_SETTINGS) -> Graph:
    _check_budget(spec.vertex_count, settings)
    d, r = spec.dimension, spec.radius
    coords = spec.coordinates()
    ids = np.arange(spec.box_vertex_count)
    strides = np.array([spec.side ** (d - 1 - axis) for axis in range(d)])

    interior = []
    for axis in range(d):
        inside = coords[:, axis] < r
        interior.append(np.column_stack([ids[inside], ids[inside] + strides[axis]]))
    edges = [np.vstack(interior)]

    if spec.boundary is Boundary.WIRED:
        w = spec.wired_vertex
        for axis in range(d):
            for face in (r, -r):
                on_face = ids[coords[:, axis] == face]
                edges.append(np.column_stack([on_face, np.full(len(on_face), w)]))
    graph = Graph(spec.vertex_count, np.vstack(edges), spec.wired_vertex)
    log.debug("built %s box d=%d r=%d: %d vertices, %d edges", spec.boundary.value, d, r, graph.vertex_count, graph.edge_count)
    return graph


@dataclass(frozen=True, eq=False)
class CounterexampleGraph:
    """Two wired Z^5 boxes joined by one bridge edge between their origins."""

    graph: Graph
    spec: LatticeBoxSpec
    wired_vertices: tuple[int, int]
    origins: tuple[int, int]
    bridge_edge: int

    def copy_offset(self, copy: int) -> int:
        return copy * self.spec.vertex_count

    def vertex_id(self, point: Sequence[int], copy: int) -> int:
        return self.copy_offset(copy) + self.spec.vertex_id(point)

    def common_wired_graph(self) -> Graph:
        """
        The same graph with both wired vertices identified: the finite picture
        of the two copies seen from one exhaustion. The second wired vertex is
        the last id, so every other id and every edge id is unchanged.
        """
        w1, w2 = self.wired_vertices
        edges = np.where(self.graph.edges == w2, w1, self.graph.edges)
        return Graph(self.graph.vertex_count - 1, edges, w1)


def counterexample_graph(r: int, *, dimension: int = 5, settings: Settings = DEFAULT_SETTINGS) -> CounterexampleGraph:
    """
    Two copies of the wired box of Z^dimension with radius r and a bridge edge
    between the copies' origins. Each copy keeps its own wired vertex.
    """
    spec = LatticeBoxSpec(dimension, r, Boundary.WIRED)
    _check_budget(2 * spec.vertex_count, settings)
    single = build_lattice_box(spec, settings=settings)
    n = spec.vertex_count
    o1, o2 = spec.origin, n + spec.origin
    edges = np.vstack([single.edges, single.edges + n, [[o1, o2]]])
    graph = Graph(2 * n, edges, spec.wired_vertex)
    return CounterexampleGraph(
        graph=graph,
        spec=spec,
        wired_vertices=(spec.wired_vertex, n + spec.wired_vertex),
        origins=(o1, o2),
        bridge_edge=len(edges) - 1,
    )
