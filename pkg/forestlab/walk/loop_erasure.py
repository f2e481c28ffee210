"""
loop_erasure.py - Chronological loop erasure, cut times, LERW reversal oracle

Loop erasure keeps, after vertex u_j, the vertex that follows the LAST visit
to u_j. Erasing online (truncate back to the earlier copy on every revisit)
produces the same simple path, which is how both loop_erase and the running
length counter work.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Hashable, Sequence

import numpy as np

from ..errors import ContractViolation
from ..graph import Graph
from .paths import Path

log = logging.getLogger(__name__)


class OnlineLoopErasure:
    """Loop erasure of a growing path; `push` returns the current erased length."""

    def __init__(self, start: Hashable):
        self.vertices: list[Hashable] = [start]
        self.times: list[int] = [0]
        self._index: dict[Hashable, int] = {start: 0}
        self._clock = 0

    def push(self, v: Hashable) -> int:
        self._clock += 1
        index = self._index
        at = index.get(v)
        if at is None:
            index[v] = len(self.vertices)
            self.vertices.append(v)
            self.times.append(self._clock)
        else:
            for w in self.vertices[at + 1 :]:
                del index[w]
            del self.vertices[at + 1 :]
            del self.times[at + 1 :]
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)


def loop_erase(path: Path | Sequence[Hashable]) -> Path:
    vertices = path.vertices if isinstance(path, Path) else tuple(path)
    if not vertices:
        raise ContractViolation("cannot loop-erase an empty path")
    erasure = OnlineLoopErasure(vertices[0])
    for v in vertices[1:]:
        erasure.push(v)
    return Path(tuple(erasure.vertices))


def loop_erasure_times(labels: Sequence[Hashable]) -> list[int]:
    """Indices into `labels` of the vertices kept by loop erasure."""
    erasure = OnlineLoopErasure(labels[0])
    for v in labels[1:]:
        erasure.push(v)
    return erasure.times


def erased_lengths(labels: Sequence[Hashable]) -> np.ndarray:
    """lengths[k] = |LE(labels[0..k])| for every prefix."""
    erasure = OnlineLoopErasure(labels[0])
    out = np.zeros(len(labels), dtype=np.int64)
    push = erasure.push
    for k in range(1, len(labels)):
        out[k] = push(labels[k])
    return out


def cut_time_indices(labels: np.ndarray) -> np.ndarray:
    """
    Window indices t whose strict past and strict future share no vertex.

    A vertex first seen at f and last seen at l rules out every t with f < t < l.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, inv = np.unique(labels, return_inverse=True)
    inv = inv.ravel()
    idx = np.arange(n)
    first = np.full(inv.max() + 1, n, dtype=np.int64)
    last = np.full(inv.max() + 1, -1, dtype=np.int64)
    np.minimum.at(first, inv, idx)
    np.maximum.at(last, inv, idx)
    spans = last - first >= 2
    diff = np.zeros(n + 1, dtype=np.int64)
    np.add.at(diff, first[spans] + 1, 1)
    np.add.at(diff, last[spans], -1)
    blocked = np.cumsum(diff[:n]) > 0
    return np.flatnonzero(~blocked)


def cut_times(path: Path) -> list[int]:
    """
    Cut times of the path window, in two-sided time (index minus origin_offset).

    Certified only relative to the window: a finite window cannot see later
    returns of the infinite walk it truncates.
    """
    ids: dict[Hashable, int] = {}
    labels = np.fromiter((ids.setdefault(v, len(ids)) for v in path.vertices), dtype=np.int64, count=len(path))
    return (cut_time_indices(labels) - path.origin_offset).tolist()


def stopped_lerw_law(graph: Graph, start: int, target: int, max_steps: int) -> tuple[dict[tuple[int, ...], float], float]:
    """
    Exact law of LE[walk from start stopped at target], by forward recursion on
    the erased path. Returns (law over erased paths, unabsorbed mass after max_steps).
    """
    if start == target:
        return {(start,): 1.0}, 0.0
    adj, _ = graph.adjacency_lists()
    dist: dict[tuple[int, ...], float] = {(start,): 1.0}
    absorbed: dict[tuple[int, ...], float] = defaultdict(float)
    for _ in range(max_steps):
        nxt: dict[tuple[int, ...], float] = defaultdict(float)
        for erased, p in dist.items():
            u = erased[-1]
            share = p / len(adj[u])
            for w in adj[u]:
                if w in erased:
                    step = erased[: erased.index(w) + 1]
                else:
                    step = erased + (w,)
                if w == target:
                    absorbed[step] += share
                else:
                    nxt[step] += share
        dist = nxt
        if not dist:
            break
    return dict(absorbed), float(sum(dist.values()))


def lerw_reversal_law(graph: Graph, a: int, b: int, max_steps: int = 400):
    """
    Law of LE[walk a -> b] next to the law of the reversal of LE[walk b -> a].

    Returns (forward law, reversed backward law, total unabsorbed tail mass);
    the two laws agree up to the tail mass.
    """
    forward, tail_f = stopped_lerw_law(graph, a, b, max_steps)
    backward, tail_b = stopped_lerw_law(graph, b, a, max_steps)
    reversed_law = {path[::-1]: p for path, p in backward.items()}
    log.debug("LERW reversal oracle %d<->%d: %d paths, tail %.2e", a, b, len(forward), tail_f + tail_b)
    return forward, reversed_law, tail_f + tail_b
