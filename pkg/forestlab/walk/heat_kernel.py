"""
heat_kernel.py - Return probabilities of simple random walk on Z^d and Z_i sums

p_t(o,o) is computed exactly by splitting the t steps among the d axes:
if F_k(m) is the return probability of an m-step walk on Z^k, then
    F_k(m) = sum_j Binom(m, 1/k)(j) * q(j) * F_{k-1}(m - j),
where q(j) = C(j, j/2) 2^-j is the one-dimensional return probability.
Past the exact work budget (d*t^2 for the recursion) a Monte Carlo estimate with a confidence
half-width is returned instead.

Z_i = sum_t (t+1)^i p_t(o,o) is finite iff d > 2i + 2, i.e. Z_1 needs d >= 5
and Z_2 needs d >= 7.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError
from ..rng import RngStream, as_generator
from ..stats import mean_ci

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeatKernelValue:
    value: float
    half_width: float = 0.0
    exact: bool = True


def _one_dimensional(T: int) -> np.ndarray:
    n = np.arange(T + 1)
    q = np.zeros(T + 1)
    even = n[n % 2 == 0]
    q[even] = np.exp(gammaln(even + 1) - 2 * gammaln(even / 2 + 1) - even * math.log(2.0))
    return q


@lru_cache(maxsize=32)
def return_probabilities(dimension: int, T: int) -> np.ndarray:
    """Array of p_t(o,o) for t = 0..T, exact."""
    if dimension < 1 or T < 0:
        raise DomainError(f"need dimension >= 1 and T >= 0, got d={dimension}, T={T}")
    q = _one_dimensional(T)
    F = q.copy()
    for k in range(2, dimension + 1):
        logp, log1p = math.log(1.0 / k), math.log(1.0 - 1.0 / k)
        G = np.zeros(T + 1)
        for m in range(0, T + 1, 2):
            j = np.arange(0, m + 1, 2)
            logw = gammaln(m + 1) - gammaln(j + 1) - gammaln(m - j + 1) + j * logp + (m - j) * log1p
            G[m] = np.sum(np.exp(logw) * q[j] * F[m - j])
        F = G
    F.setflags(write=False)
    return F


def heat_kernel(
    dimension: int,
    t: int,
    *,
    rng: RngStream | np.random.Generator | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> HeatKernelValue:
    """P[S(t) = o] for simple random walk on Z^d started at o."""
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if dimension * t * t <= settings.heat_kernel_exact_work:
        return HeatKernelValue(float(return_probabilities(dimension, t)[t]))
    if t % 2:
        return HeatKernelValue(0.0)
    if rng is None:
        raise DomainError(f"d*t^2 = {dimension * t * t} is past the exact work budget; pass rng for a Monte Carlo estimate")
    gen = as_generator(rng)
    hits = []
    remaining = settings.heat_kernel_mc_samples
    while remaining > 0:
        batch = min(remaining, max(1, 10**7 // max(t, 1)))
        moves = gen.integers(0, 2 * dimension, size=(batch, t))
        disp = np.zeros((batch, dimension), dtype=np.int64)
        for axis in range(dimension):
            disp[:, axis] = (moves == axis).sum(axis=1) - (moves == axis + dimension).sum(axis=1)
        hits.append(np.all(disp == 0, axis=1).astype(float))
        remaining -= batch
    mean, half = mean_ci(np.concatenate(hits))
    log.info("heat kernel d=%d t=%d by Monte Carlo: %.3e +- %.1e", dimension, t, mean, half)
    return HeatKernelValue(mean, half, exact=False)


def heat_kernel_distribution(dimension: int, t: int) -> np.ndarray:
    """Full law of S(t) as a dense array over {-t..t}^d (small t only)."""
    side = 2 * t + 1
    dist = np.zeros((side,) * dimension)
    dist[(t,) * dimension] = 1.0
    for _ in range(t):
        step = np.zeros_like(dist)
        for axis in range(dimension):
            step += np.roll(dist, 1, axis=axis) + np.roll(dist, -1, axis=axis)
        dist = step / (2 * dimension)
    return dist


def heat_kernel_offdiagonal(dimension: int, t: int, point) -> float:
    """P[S(t) = point]."""
    if any(abs(int(x)) > t for x in point):
        return 0.0
    dist = heat_kernel_distribution(dimension, t)
    return float(dist[tuple(int(x) + t for x in point)])


def z_partial_sum(dimension: int, T: int, order: int) -> float:
    """sum_{t <= T} (t+1)^order p_t(o,o)."""
    p = return_probabilities(dimension, T)
    t = np.arange(T + 1, dtype=float)
    return float(np.sum((t + 1) ** order * p))


@dataclass(frozen=True)
class ZValues:
    dimension: int
    T: int
    z1: float
    z2: float | None
    tail1: float
    tail2: float | None
    constant: float

    def upper(self, order: int) -> float:
        """Truncated value plus tail bound."""
        if order == 1:
            return self.z1 + self.tail1
        if self.z2 is None:
            raise DomainError(f"Z_2 diverges for d={self.dimension}; it is finite only for d >= 7")
        return self.z2 + self.tail2


def local_limit_constant(dimension: int, T: int) -> float:
    """
    C with p_t(o,o) <= C t^{-d/2}: the larger of the local-limit constant
    2 (d / 2 pi)^{d/2} and the largest observed ratio p_t t^{d/2} for t <= T.
    """
    asymptotic = 2.0 * (dimension / (2.0 * math.pi)) ** (dimension / 2.0)
    if T < 1:
        return asymptotic
    p = return_probabilities(dimension, T)
    t = np.arange(1, T + 1, dtype=float)
    return max(asymptotic, float(np.max(p[1:] * t ** (dimension / 2.0))))


def _tail(order: int, dimension: int, T: int, C: float) -> float:
    s = dimension / 2.0 - order
    if T < 1:
        # t >= 1: (t+1)^i <= 2^i t^i and sum t^-s <= 1 + 1/(s-1)
        return C * 2.0**order * (1.0 + 1.0 / (s - 1.0))
    return C * (1.0 + 1.0 / T) ** order * T ** (1.0 - s) / (s - 1.0)


def z_value(dimension: int, T: int, order: int) -> tuple[float, float]:
    """(truncated Z_order, tail bound); DomainError where the full sum diverges."""
    threshold = 2 * order + 3
    if dimension < threshold:
        raise DomainError(f"Z_{order} diverges for d={dimension}; it is finite only for d >= {threshold}")
    C = local_limit_constant(dimension, T)
    return z_partial_sum(dimension, T, order), _tail(order, dimension, T, C)


def z_values(dimension: int, T: int) -> ZValues:
    z1, tail1 = z_value(dimension, T, 1)
    z2 = tail2 = None
    if dimension >= 7:
        z2, tail2 = z_value(dimension, T, 2)
    return ZValues(dimension, T, z1, z2, tail1, tail2, local_limit_constant(dimension, T))
