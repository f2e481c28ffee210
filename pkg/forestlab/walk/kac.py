"""
kac.py - Kac's return-time identity on finite Markov chains

For an irreducible finite chain started from stationarity conditioned on an
event E, the expected first return time to E equals 1/P[E]. kac_check
simulates the left-hand side and reports it next to the exact right-hand side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.linalg
import scipy.sparse as sps
from scipy.sparse.csgraph import connected_components

from ..errors import DomainError
from ..rng import RngStream, as_generator
from ..stats import mean_ci

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MarkovChain:
    transition: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.transition, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise DomainError("transition matrix must be square")
        if np.any(P < 0) or not np.allclose(P.sum(axis=1), 1.0):
            raise DomainError("transition matrix rows must be probability vectors")
        object.__setattr__(self, "transition", P)

    @property
    def size(self) -> int:
        return self.transition.shape[0]

    def is_irreducible(self) -> bool:
        count, _ = connected_components(sps.csr_matrix(self.transition > 0), directed=True, connection="strong")
        return count == 1

    def stationary(self) -> np.ndarray:
        if not self.is_irreducible():
            raise DomainError("chain is reducible; its stationary law is not unique")
        n = self.size
        # pi (P - I) = 0 with sum(pi) = 1
        A = np.vstack([(self.transition - np.eye(n)).T, np.ones(n)])
        b = np.zeros(n + 1)
        b[-1] = 1.0
        pi, *_ = scipy.linalg.lstsq(A, b)
        return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()


def two_state_chain(p: float = 0.5) -> MarkovChain:
    return MarkovChain(np.array([[1 - p, p], [p, 1 - p]]))


def cycle_chain(n: int) -> MarkovChain:
    """Deterministic rotation i -> i+1 mod n."""
    return MarkovChain(np.roll(np.eye(n), 1, axis=1))


@dataclass(frozen=True)
class KacReport:
    mean_return_time: float
    half_width: float
    inverse_probability: float
    samples: int

    def consistent(self, slack: float = 0.0) -> bool:
        return abs(self.mean_return_time - self.inverse_probability) <= self.half_width + slack

    def as_dict(self) -> dict:
        return {
            "mean_return_time": self.mean_return_time,
            "half_width": self.half_width,
            "inverse_probability": self.inverse_probability,
            "samples": self.samples,
        }


def return_times(chain: MarkovChain, event: Iterable[int], samples: int, rng: RngStream | np.random.Generator, max_steps: int = 10**6) -> np.ndarray:
    """First return times to `event` for `samples` chains started from pi conditioned on the event."""
    gen = as_generator(rng)
    states = np.array(sorted(set(event)), dtype=np.int64)
    if len(states) == 0:
        raise DomainError("event must contain at least one state")
    pi = chain.stationary()
    in_event = np.zeros(chain.size, dtype=bool)
    in_event[states] = True
    start_law = pi[states] / pi[states].sum()
    current = gen.choice(states, size=samples, p=start_law)
    cumulative = np.cumsum(chain.transition, axis=1)
    times = np.zeros(samples, dtype=np.int64)
    active = np.ones(samples, dtype=bool)
    for step in range(1, max_steps + 1):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        u = gen.random(len(idx))
        rows = cumulative[current[idx]]
        nxt = np.minimum((rows <= u[:, None]).sum(axis=1), chain.size - 1)
        current[idx] = nxt
        done = in_event[nxt]
        times[idx[done]] = step
        active[idx[done]] = False
    if active.any():
        raise DomainError(f"{int(active.sum())} chains did not return within {max_steps} steps")
    return times


def kac_check(chain: MarkovChain, event: Iterable[int], samples: int, rng: RngStream | np.random.Generator) -> KacReport:
    event = list(event)
    pi = chain.stationary()
    p_event = float(pi[event].sum())
    times = return_times(chain, event, samples, rng)
    mean, half = mean_ci(times)
    log.info("Kac check: E[tau|E]=%.5f +- %.5f, 1/P[E]=%.5f", mean, half, 1.0 / p_event)
    return KacReport(mean, half, 1.0 / p_event, samples)
