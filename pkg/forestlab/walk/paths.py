"""
paths.py - Paths, loops and marked loops

A Path is a vertex sequence; vertices are graph ids on finite graphs and
integer coordinate tuples on the unbounded lattice. `origin_offset` shifts the
index origin for two-sided paths: vertex at two-sided time n is
vertices[n + origin_offset].
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Hashable, Iterator, Sequence

from ..errors import ContractViolation
from ..graph import Graph


@dataclass(frozen=True)
class Path:
    vertices: tuple[Hashable, ...]
    origin_offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ContractViolation("a path has at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def first(self) -> Hashable:
        return self.vertices[0]

    @property
    def last(self) -> Hashable:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.vertices)

    def __getitem__(self, index):
        return self.vertices[index]

    def at(self, n: int) -> Hashable:
        """Vertex at two-sided time n."""
        i = n + self.origin_offset
        if not 0 <= i < len(self.vertices):
            raise IndexError(f"time {n} outside the path window")
        return self.vertices[i]

    def reversed(self) -> Path:
        return Path(self.vertices[::-1], len(self.vertices) - 1 - self.origin_offset)

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def check_adjacent(self, graph: Graph) -> None:
        for u, v in itertools.pairwise(self.vertices):
            nbrs, _ = graph.neighbors(u)
            if v not in set(nbrs.tolist()):
                raise ContractViolation(f"path step {u} -> {v} is not an edge")

    def edge_ids(self, graph: Graph) -> list[int]:
        return [graph.edge_between(u, v) for u, v in itertools.pairwise(self.vertices)]


class MarkKind(enum.Enum):
    TIME = "time"
    STEP = "step"


@dataclass(frozen=True)
class LoopMark:
    kind: MarkKind
    index: int


@dataclass(frozen=True)
class MarkedLoop:
    """A loop (first vertex == last vertex) with a marked time or a marked step."""

    loop: Path
    mark: LoopMark | None = None

    def __post_init__(self):
        if self.loop.first != self.loop.last:
            raise ContractViolation("a loop must end at its root")
        if self.mark is not None:
            top = self.loop.length if self.mark.kind is MarkKind.TIME else self.loop.length - 1
            if not 0 <= self.mark.index <= top:
                raise ContractViolation(f"{self.mark.kind.value} mark {self.mark.index} outside 0..{top}")

    @property
    def root(self) -> Hashable:
        return self.loop.first

    def weight(self, dimension: int) -> float:
        """Loop-measure weight (2d)^(-|loop|) on Z^d."""
        return (2.0 * dimension) ** (-self.loop.length)


def lattice_steps(dimension: int) -> list[tuple[int, ...]]:
    steps = []
    for axis in range(dimension):
        for sign in (1, -1):
            step = [0] * dimension
            step[axis] = sign
            steps.append(tuple(step))
    return steps


def enumerate_loops(dimension: int, length: int, root: Sequence[int] | None = None) -> Iterator[Path]:
    """All nearest-neighbour loops of the given length rooted at `root` (origin by default)."""
    root = tuple(root) if root is not None else (0,) * dimension
    steps = lattice_steps(dimension)
    for combo in itertools.product(steps, repeat=length):
        if any(sum(s[axis] for s in combo) for axis in range(dimension)):
            continue
        pos = list(root)
        vertices = [root]
        for s in combo:
            pos = [p + ds for p, ds in zip(pos, s)]
            vertices.append(tuple(pos))
        yield Path(tuple(vertices))


def marked_loop_mass(dimension: int, length: int, kind: MarkKind) -> float:
    """Total loop-measure weight of marked loops of one length, by enumeration."""
    total = 0.0
    marks = length + 1 if kind is MarkKind.TIME else length
    for loop in enumerate_loops(dimension, length):
        total += marks * MarkedLoop(loop).weight(dimension)
    return total
