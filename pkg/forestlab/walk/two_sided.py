"""
two_sided.py - Two-sided walks on Z^d: two-sided LERW, cut times T_n, counters L_n

All objects here are infinite in principle and are simulated on a window of
`horizon` steps in each direction. Every sample carries a censoring flag when
the quantity it reports could be changed by steps beyond the window; the
certified zone is the first half of the forward window.

Two-sided LERW: S^1, S^2 independent walks from the origin. The sample is
accepted when LE[S^1] misses S^2[1, horizon] and, if required by settings,
the bounding boxes of the two walk tails are disjoint (a separation
certificate against intersections beyond the window). The returned path is
LE[S^2] reversed followed by LE[S^1].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError, StatisticalFailure
from ..rng import RngStream, as_generator
from .loop_erasure import cut_time_indices, erased_lengths, loop_erasure_times
from .paths import Path
from .srw import lattice_labels, lattice_walk

log = logging.getLogger(__name__)


def _check_dimension(dimension: int, minimum: int, why: str) -> None:
    if dimension < minimum:
        raise DomainError(f"d={dimension}: {why} requires d >= {minimum}")


@dataclass(frozen=True)
class TwoSidedLerw:
    path: Path
    accepted: bool
    attempts: int
    certificate_rejections: int


@dataclass(frozen=True)
class LerwAttempt:
    path: Path | None
    accepted: bool
    hit: bool
    separated: bool


def _tails_separated(pos1: np.ndarray, pos2: np.ndarray, tail: float) -> bool:
    start = int(len(pos1) * (1.0 - tail))
    a, b = pos1[start:], pos2[start:]
    return bool(np.any((a.max(axis=0) < b.min(axis=0)) | (b.max(axis=0) < a.min(axis=0))))


def two_sided_lerw_attempt(
    dimension: int,
    horizon: int,
    rng: RngStream | np.random.Generator,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> LerwAttempt:
    """One draw of (S^1, S^2) and the acceptance test."""
    _check_dimension(dimension, 5, "the non-intersection event has positive probability only when it")
    gen = as_generator(rng)
    pos1 = lattice_walk(dimension, horizon, gen)
    pos2 = lattice_walk(dimension, horizon, gen)
    lab1, lab2 = lattice_labels(pos1, pos2)
    keep1 = loop_erasure_times(lab1.tolist())
    hit = bool(np.isin(lab2[1:], lab1[keep1]).any())
    separated = (not settings.require_separation) or _tails_separated(pos1, pos2, settings.separation_tail)
    if hit or not separated:
        return LerwAttempt(None, False, hit, separated)
    keep2 = loop_erasure_times(lab2.tolist())
    negative = [tuple(p) for p in pos2[keep2][::-1].tolist()]
    positive = [tuple(p) for p in pos1[keep1][1:].tolist()]
    return LerwAttempt(Path(tuple(negative + positive), len(keep2) - 1), True, hit, separated)


def two_sided_lerw(
    dimension: int,
    horizon: int,
    rng: RngStream | np.random.Generator,
    *,
    settings: Settings = DEFAULT_SETTINGS,
) -> TwoSidedLerw:
    """Rejection sampler for the window-truncated two-sided LERW on Z^d, d >= 5."""
    _check_dimension(dimension, 5, "the non-intersection event has positive probability only when it")
    gen = as_generator(rng)
    certificate_rejections = 0
    for attempt in range(1, settings.attempt_cap + 1):
        result = two_sided_lerw_attempt(dimension, horizon, gen, settings=settings)
        if result.accepted:
            log.debug("two-sided LERW accepted after %d attempts", attempt)
            return TwoSidedLerw(result.path, True, attempt, certificate_rejections)
        if not result.hit:
            certificate_rejections += 1
    raise StatisticalFailure(settings.attempt_cap, "two-sided LERW")


@dataclass(frozen=True)
class CensoredValue:
    """When censored, value is a lower bound for the quantity (the window end if it never occurred)."""

    value: int
    censored: bool


@dataclass(frozen=True)
class CutTimeStatistics:
    """T_n and L_n read off one two-sided walk window."""

    T: dict[int, CensoredValue]
    L: dict[int, CensoredValue]
    T0: int


def cut_time_statistics(
    dimension: int,
    ns: Sequence[int],
    horizon: int,
    rng: RngStream | np.random.Generator,
) -> CutTimeStatistics:
    """
    T_0 = last t >= 0 with S(t) in S((-inf, 0]); T_i = first cut time of the
    two-sided walk after T_{i-1}. L_n = #{k >= 0 : |LE[S[0,k]]| <= n} on the
    forward walk. Values past half the window are censored.
    """
    _check_dimension(dimension, 7, "a finite mean for T_n and L_n")
    gen = as_generator(rng)
    forward = lattice_walk(dimension, horizon, gen)
    backward = lattice_walk(dimension, horizon, gen)
    lab1, lab2 = lattice_labels(forward, backward)
    certified = horizon // 2

    T0 = int(np.flatnonzero(np.isin(lab1, lab2)).max())
    window = np.concatenate([lab2[::-1], lab1[1:]])
    times = cut_time_indices(window) - horizon
    later = times[times > T0]

    T: dict[int, CensoredValue] = {}
    for n in ns:
        if n == 0:
            T[0] = CensoredValue(T0, T0 > certified)
        elif len(later) >= n and later[n - 1] <= certified:
            T[n] = CensoredValue(int(later[n - 1]), False)
        else:
            T[n] = CensoredValue(int(later[n - 1]) if len(later) >= n else horizon, True)

    lengths = erased_lengths(lab1.tolist())
    tail_min = int(lengths[certified:].min())
    L = {n: CensoredValue(int(np.count_nonzero(lengths <= n)), tail_min <= n) for n in ns}
    return CutTimeStatistics(T, L, T0)


def cut_time_T_n(dimension: int, n: int, horizon: int, rng: RngStream | np.random.Generator) -> CensoredValue:
    return cut_time_statistics(dimension, [n], horizon, rng).T[n]


def lerw_length_counter_L_n(dimension: int, n: int, horizon: int, rng: RngStream | np.random.Generator) -> CensoredValue:
    return cut_time_statistics(dimension, [n], horizon, rng).L[n]


def increment_directions(path: Path, start: int, stop: int) -> np.ndarray:
    """Axis-direction codes (0..2d-1) of the steps between two-sided times [start, stop)."""
    codes = []
    for n in range(start, stop):
        a, b = path.at(n), path.at(n + 1)
        diff = [y - x for x, y in zip(a, b)]
        axis = next(i for i, v in enumerate(diff) if v)
        codes.append(axis if diff[axis] > 0 else axis + len(diff))
    return np.array(codes, dtype=np.int64)
