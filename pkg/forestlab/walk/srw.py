"""
srw.py - Simple random walk engines

run_srw walks a finite Graph, choosing uniformly among incident edges
(parallel edges counted with multiplicity). lattice_walk draws a whole
nearest-neighbour walk on unbounded Z^d at once as an integer coordinate
array; lattice_labels turns coordinate rows into integer vertex labels so
intersection and loop-erasure work on plain ints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError, ResourceError, StepBudgetExceeded
from ..graph import Graph
from ..rng import RngStream, UniformBuffer, as_generator
from .paths import Path

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HitSet:
    targets: frozenset[int]

    def __init__(self, targets):
        object.__setattr__(self, "targets", frozenset(int(t) for t in targets))


@dataclass(frozen=True)
class FixedSteps:
    steps: int


@dataclass(frozen=True)
class HitWired:
    pass


StopRule = Union[HitSet, FixedSteps, HitWired]


def run_srw(
    graph: Graph,
    start: int,
    stop: StopRule,
    rng: RngStream | np.random.Generator,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> Path:
    adj, _ = graph.adjacency_lists()
    buf = UniformBuffer(as_generator(rng))

    if isinstance(stop, FixedSteps):
        if stop.steps > settings.step_budget:
            raise ResourceError("step", stop.steps, settings.step_budget)
        vertices = [start]
        u = start
        for _ in range(stop.steps):
            nbrs = adj[u]
            if not nbrs:
                raise DomainError(f"vertex {u} has no neighbours")
            u = nbrs[buf.choice(len(nbrs))]
            vertices.append(u)
        return Path(tuple(vertices))

    if isinstance(stop, HitWired):
        if graph.wired_vertex is None:
            raise DomainError("HitWired needs a graph with a wired vertex")
        targets = {graph.wired_vertex}
    elif isinstance(stop, HitSet):
        targets = set(stop.targets)
    else:
        raise DomainError(f"unknown stop rule {stop!r}")

    vertices = [start]
    u = start
    cap = settings.step_budget
    steps = 0
    while u not in targets:
        if steps >= cap:
            raise StepBudgetExceeded(cap)
        nbrs = adj[u]
        if not nbrs:
            raise DomainError(f"vertex {u} has no neighbours")
        u = nbrs[buf.choice(len(nbrs))]
        vertices.append(u)
        steps += 1
    return Path(tuple(vertices))


def lattice_walk(dimension: int, steps: int, gen: np.random.Generator) -> np.ndarray:
    """(steps+1, d) positions of a simple random walk on Z^d from the origin."""
    moves = gen.integers(0, 2 * dimension, size=steps)
    pos = np.zeros((steps + 1, dimension), dtype=np.int32)
    pos[np.arange(1, steps + 1), moves % dimension] = np.where(moves < dimension, 1, -1)
    np.cumsum(pos, axis=0, out=pos)
    return pos


def _row_view(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows)
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()


def lattice_labels(*walks: np.ndarray) -> list[np.ndarray]:
    """Shared integer labels for the rows of several coordinate arrays."""
    stacked = np.concatenate([_row_view(w) for w in walks])
    _, inv = np.unique(stacked, return_inverse=True)
    inv = inv.ravel()
    bounds = np.cumsum([0] + [len(w) for w in walks])
    return [inv[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]
