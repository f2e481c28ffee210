"""
tests/test_two_sided.py - Two-sided LERW, cut times T_n and counters L_n on Z^d

Run: pytest tests/test_two_sided.py -v
"""

from collections import Counter

import numpy as np
import pytest

from forestlab.config import DEFAULT_SETTINGS
from forestlab.errors import DomainError
from forestlab.rng import RngStream
from forestlab.stats import chi_square_two_sample, mean_ci
from forestlab.walk import cut_time_T_n, lerw_length_counter_L_n, loop_erase, two_sided_lerw
from forestlab.walk.heat_kernel import z_values
from forestlab.walk.srw import lattice_labels, lattice_walk
from forestlab.walk.two_sided import cut_time_statistics, increment_directions, two_sided_lerw_attempt

NO_CERTIFICATE = DEFAULT_SETTINGS.replace(require_separation=False)


def test_lattice_walk_steps_are_unit():
    pos = lattice_walk(5, 300, np.random.default_rng(0))
    assert pos.shape == (301, 5)
    assert np.all(pos[0] == 0)
    assert np.all(np.abs(np.diff(pos, axis=0)).sum(axis=1) == 1)


def test_lattice_labels_are_shared():
    a = np.array([[0, 0], [1, 0], [1, 1]])
    b = np.array([[0, 0], [0, 1], [1, 1]])
    la, lb = lattice_labels(a, b)
    assert la[0] == lb[0]
    assert la[2] == lb[2]
    assert la[1] != lb[1]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_two_sided_lerw_needs_d5(d):
    with pytest.raises(DomainError):
        two_sided_lerw(d, 100, RngStream(0))


@pytest.mark.parametrize("seed", range(4))
def test_two_sided_lerw_is_simple_nearest_neighbour(seed):
    sample = two_sided_lerw(5, 400, RngStream(seed), settings=NO_CERTIFICATE)
    path = sample.path
    assert sample.accepted
    assert sample.attempts >= 1
    assert path.is_simple(), "the two halves of an accepted sample do not meet"
    assert path.at(0) == (0,) * 5
    steps = np.diff(np.array(path.vertices), axis=0)
    assert np.all(np.abs(steps).sum(axis=1) == 1)
    # both halves are loop-erased paths
    forward = path.vertices[path.origin_offset :]
    assert loop_erase(forward).vertices == tuple(forward)
    directions = increment_directions(path, -path.origin_offset, len(path) - 1 - path.origin_offset)
    assert directions.min() >= 0 and directions.max() < 10


def test_attempt_rejects_on_hit():
    found_hit = False
    for seed in range(40):
        attempt = two_sided_lerw_attempt(5, 200, RngStream(seed), settings=NO_CERTIFICATE)
        assert attempt.accepted == (not attempt.hit)
        assert (attempt.path is None) == attempt.hit
        found_hit |= attempt.hit
    assert found_hit, "in 40 short attempts at least one should intersect"


def test_separation_certificate_counts_rejections():
    sample = two_sided_lerw(5, 400, RngStream(3))
    assert sample.accepted
    assert sample.certificate_rejections <= sample.attempts - 1


@pytest.mark.parametrize("d", [5, 6])
def test_cut_time_statistics_need_d7(d):
    with pytest.raises(DomainError):
        cut_time_statistics(d, [1], 100, RngStream(0))


@pytest.mark.parametrize("seed", range(3))
def test_cut_time_statistics_ordering(seed):
    ns = [0, 1, 2, 4, 8]
    stats = cut_time_statistics(7, ns, 2000, RngStream(seed))
    assert stats.T0 >= 0
    assert stats.T[0].value == stats.T0
    values = [stats.T[n].value for n in ns if not stats.T[n].censored]
    assert values == sorted(values) and len(set(values)) == len(values)
    for n in ns[1:]:
        if not stats.T[n].censored:
            assert stats.T[n].value >= stats.T0 + n
    counters = [stats.L[n].value for n in ns]
    assert counters == sorted(counters)
    for n in ns:
        assert stats.L[n].value >= n + 1, "the first n+1 prefixes have erased length <= n"


def test_single_quantity_helpers_agree():
    stream = RngStream(5, 2)
    both = cut_time_statistics(7, [3], 1500, stream)
    assert cut_time_T_n(7, 3, 1500, stream) == both.T[3]
    assert lerw_length_counter_L_n(7, 3, 1500, stream) == both.L[3]



# ============================================================================
# Stationarity of increments and cut-time bounds
# ============================================================================

def _step_pairs(path, start, stop):
    """(step, next step) direction pairs, one every 4 steps."""
    codes = increment_directions(path, start, stop).tolist()
    return Counter((codes[i], codes[i + 1]) for i in range(0, len(codes) - 1, 4))


def test_increments_look_stationary_along_the_path():
    near, far = Counter(), Counter()
    used = 0
    for seed in range(300):
        path = two_sided_lerw(5, 400, RngStream(seed, 1), settings=NO_CERTIFICATE).path
        if len(path) - 1 - path.origin_offset < 80:
            continue
        near += _step_pairs(path, 10, 30)
        far += _step_pairs(path, 60, 80)
        used += 1
    assert used >= 250, f"only {used} paths reached time 80"
    # no immediate reversals on a loop-erased path
    assert all((a - b) % 10 != 5 for a, b in near | far)
    result = chi_square_two_sample(near, far)
    assert result.passed, result.as_dict()


def test_cut_time_means_within_z_bounds():
    z = z_values(7, 400)
    z1, z2 = z.upper(1), z.upper(2)
    ns = [1, 2, 4, 8]
    runs = [cut_time_statistics(7, ns, 1000, RngStream(21, i)) for i in range(120)]
    for n in ns:
        T = [run.T[n].value for run in runs]
        L = [run.L[n].value for run in runs]
        assert sum(run.T[n].censored for run in runs) <= 6, f"n={n}: too many censored T_n"
        mean, half = mean_ci(T)
        assert mean - half <= z1 * n + z2, f"E[T_{n}] ~ {mean:.2f} +- {half:.2f} above {z1 * n + z2:.2f}"
        mean, half = mean_ci(L)
        assert mean - half <= z1 * n + z2 + 1, f"E[L_{n}] ~ {mean:.2f} +- {half:.2f} above {z1 * n + z2 + 1:.2f}"


if __name__ == "__main__":
    pytest.main(["-v", __file__])
