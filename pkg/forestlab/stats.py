"""
stats.py - Goodness-of-fit, two-sample and confidence helpers (scipy.stats)

Used both by the experiments and by the statistical tests. Chi-square cells
with expected count below `min_expected` are pooled into one cell before the
statistic is taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class StatResult:
    statistic: float
    p_value: float
    dof: int
    significance: float

    @property
    def passed(self) -> bool:
        return self.p_value >= self.significance

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "dof": self.dof, "passed": self.passed}


def mean_ci(samples: Sequence[float] | np.ndarray, confidence: float = 0.95) -> tuple[float, float]:
    """(mean, half-width) of a t-interval."""
    x = np.asarray(samples, dtype=float)
    if len(x) < 2:
        return (float(x.mean()) if len(x) else float("nan")), float("inf")
    sem = x.std(ddof=1) / np.sqrt(len(x))
    return float(x.mean()), float(stats.t.ppf(0.5 + confidence / 2, len(x) - 1) * sem)


def proportion_ci(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """(estimate, half-width) from the normal approximation."""
    p = successes / trials
    z = stats.norm.ppf(0.5 + confidence / 2)
    return p, float(z * np.sqrt(max(p * (1 - p), 1.0 / trials) / trials))


def chi_square_gof(
    counts: Sequence[int] | np.ndarray,
    probabilities: Sequence[float] | np.ndarray,
    *,
    significance: float = 1e-3,
    min_expected: float = 5.0,
) -> StatResult:
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probabilities, dtype=float)
    expected = probs / probs.sum() * counts.sum()
    small = expected < min_expected
    if small.any() and (~small).any():
        counts = np.append(counts[~small], counts[small].sum())
        expected = np.append(expected[~small], expected[small].sum())
    if len(counts) < 2:
        return StatResult(0.0, 1.0, 0, significance)
    stat, p = stats.chisquare(counts, expected)
    return StatResult(float(stat), float(p), len(counts) - 1, significance)


def align_counts(a: Mapping[Hashable, int], b: Mapping[Hashable, int]) -> tuple[list, np.ndarray, np.ndarray]:
    keys = sorted(set(a) | set(b), key=repr)
    return keys, np.array([a.get(k, 0) for k in keys], dtype=float), np.array([b.get(k, 0) for k in keys], dtype=float)


def chi_square_two_sample(
    counts_a: Mapping[Hashable, int],
    counts_b: Mapping[Hashable, int],
    *,
    significance: float = 1e-3,
    min_expected: float = 5.0,
) -> StatResult:
    """Homogeneity test of two samples over shared cells; sparse cells pooled."""
    _, xa, xb = align_counts(counts_a, counts_b)
    total = xa + xb
    expected_small = np.minimum(total * xa.sum(), total * xb.sum()) / (xa.sum() + xb.sum()) < min_expected
    if expected_small.any() and (~expected_small).any():
        xa = np.append(xa[~expected_small], xa[expected_small].sum())
        xb = np.append(xb[~expected_small], xb[expected_small].sum())
    keep = (xa + xb) > 0
    xa, xb = xa[keep], xb[keep]
    if len(xa) < 2:
        return StatResult(0.0, 1.0, 0, significance)
    stat, p, dof, _ = stats.chi2_contingency(np.vstack([xa, xb]), correction=False)
    return StatResult(float(stat), float(p), int(dof), significance)


def total_variation(counts_a: Mapping[Hashable, int], counts_b: Mapping[Hashable, int]) -> float:
    _, xa, xb = align_counts(counts_a, counts_b)
    return 0.5 * float(np.abs(xa / xa.sum() - xb / xb.sum()).sum())


@dataclass(frozen=True)
class TvReport:
    tv: float
    null_quantile: float
    significance: float

    @property
    def consistent_with_zero(self) -> bool:
        return self.tv <= self.null_quantile

    def as_dict(self) -> dict:
        return {"tv": self.tv, "null_quantile": self.null_quantile, "consistent_with_zero": self.consistent_with_zero}


def tv_bootstrap(
    counts_a: Mapping[Hashable, int],
    counts_b: Mapping[Hashable, int],
    gen: np.random.Generator,
    *,
    resamples: int = 1000,
    significance: float = 1e-3,
) -> TvReport:
    """
    Empirical TV distance with its bootstrap null quantile: both samples are
    redrawn from the pooled law, so the quantile is what TV looks like when the
    two laws are equal.
    """
    _, xa, xb = align_counts(counts_a, counts_b)
    na, nb = int(xa.sum()), int(xb.sum())
    pooled = (xa + xb) / (na + nb)
    observed = 0.5 * float(np.abs(xa / na - xb / nb).sum())
    sa = gen.multinomial(na, pooled, size=resamples) / na
    sb = gen.multinomial(nb, pooled, size=resamples) / nb
    null = 0.5 * np.abs(sa - sb).sum(axis=1)
    return TvReport(observed, float(np.quantile(null, 1 - significance)), significance)


def fit_envelope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, np.ndarray]:
    """Least-squares C for y ~ C x (through the origin) and the residuals."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    denom = float(np.dot(x, x))
    C = float(np.dot(x, y) / denom) if denom > 0 else 0.0
    return C, y - C * x
