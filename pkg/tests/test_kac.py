"""
tests/test_kac.py - Kac's return-time identity on small Markov chains

Run: pytest tests/test_kac.py -v
"""

import numpy as np
import pytest

from forestlab.errors import DomainError
from forestlab.rng import RngStream
from forestlab.walk import MarkovChain, cycle_chain, kac_check, two_state_chain
from forestlab.walk.kac import return_times


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cycle_return_time_is_exact(n):
    report = kac_check(cycle_chain(n), [0], 1000, RngStream(0))
    assert report.mean_return_time == n
    assert report.inverse_probability == pytest.approx(n)
    assert report.consistent(1e-9)


@pytest.mark.parametrize("p, event", [(0.5, [0]), (0.3, [0]), (0.1, [1])])
def test_two_state_chain(p, event):
    report = kac_check(two_state_chain(p), event, 50_000, RngStream(1))
    assert report.inverse_probability == pytest.approx(2.0)
    assert report.consistent(slack=3 * report.half_width), report.as_dict()


def test_event_of_several_states():
    chain = MarkovChain(np.array([[0.2, 0.5, 0.3], [0.4, 0.4, 0.2], [0.1, 0.1, 0.8]]))
    pi = chain.stationary()
    assert pi @ chain.transition == pytest.approx(pi)
    report = kac_check(chain, [0, 1], 50_000, RngStream(2))
    assert report.inverse_probability == pytest.approx(1.0 / (pi[0] + pi[1]))
    assert report.consistent(slack=3 * report.half_width), report.as_dict()


def test_return_times_are_positive():
    times = return_times(two_state_chain(0.4), [0], 500, RngStream(3))
    assert times.min() >= 1


def test_reducible_chain_raises():
    with pytest.raises(DomainError):
        MarkovChain(np.eye(2)).stationary()
    with pytest.raises(DomainError):
        kac_check(MarkovChain(np.eye(3)), [0], 10, RngStream(0))


@pytest.mark.parametrize("matrix", [
    [[0.5, 0.6], [0.5, 0.5]],
    [[1.2, -0.2], [0.0, 1.0]],
    [[1.0, 0.0, 0.0]],
])
def test_invalid_transition_matrix(matrix):
    with pytest.raises(DomainError):
        MarkovChain(np.array(matrix))


def test_empty_event_raises():
    with pytest.raises(DomainError):
        return_times(cycle_chain(3), [], 10, RngStream(0))


if __name__ == "__main__":
    pytest.main(["-v", __file__])
