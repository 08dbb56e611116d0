import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsearch import twolevel
from qsearch.errors import InvalidInputError
from qsearch.schedules import (
    ConstantSchedule,
    LinearSchedule,
    LocalAdiabaticSchedule,
    staircase_points,
    staircase_value,
)


def _quadrature_time(N, eps, s):
    # integrate dt/ds = 1 / (eps g(s)^2) with g^2 = (1 + (N-1)(2s-1)^2) / N
    mp.mp.dps = 30
    N, eps = mp.mpf(N), mp.mpf(eps)
    pts = [0, s] if s <= 0.5 else [0, 0.5, s]
    return float(mp.quad(lambda x: N / (eps * (1 + (N - 1) * (2 * x - 1) ** 2)), pts))


def test_t_of_s_examples():
    sched = LocalAdiabaticSchedule(4.0, 0.1)
    assert sched.t_of_s(0.0) == 0.0
    assert sched.t_of_s(0.5) == pytest.approx(sched.total_time / 2, rel=1e-15)
    # closed form and quadrature agree on 24.18399152...
    assert sched.t_of_s(1.0) == pytest.approx(24.183991523122905, rel=1e-13)
    assert sched.t_of_s(1.0) == pytest.approx(_quadrature_time(4.0, 0.1, 1.0), rel=1e-12)
    assert sched.total_time == pytest.approx(4 / (0.1 * math.sqrt(3)) * math.atan(math.sqrt(3)), rel=1e-15)


@pytest.mark.parametrize("N,eps,s", [(1024.0, 0.2, 0.25), (1024.0, 0.2, 1.0), (37.0, 0.7, 0.6), (2.0**20, 0.1, 0.51)])
def test_t_of_s_matches_quadrature(N, eps, s):
    assert LocalAdiabaticSchedule(N, eps).t_of_s(s) == pytest.approx(_quadrature_time(N, eps, s), rel=1e-12)


def test_frozen_values():
    sched = LocalAdiabaticSchedule(1024.0, 0.2)
    assert sched.total_time == pytest.approx(246.44696295151413, rel=1e-14)
    assert sched.t_of_s(0.25) == pytest.approx(2.496750818728187, rel=1e-13)


def test_s_of_t_examples():
    sched = LocalAdiabaticSchedule(1024.0, 0.2)
    assert sched.s_of_t(0.0) == 0.0
    assert sched.s_of_t(sched.total_time) == 1.0
    rng = np.random.default_rng(5)
    worst = max(abs(sched.s_of_t(sched.t_of_s(s)) - s) for s in rng.uniform(0, 1, 1000))
    assert worst <= 1e-10
    with pytest.raises(InvalidInputError):
        sched.s_of_t(sched.total_time * 1.1)
    with pytest.raises(InvalidInputError):
        sched.t_of_s(1.5)


def test_rate_is_eps_gap_squared():
    N, eps = 1024.0, 0.2
    sched = LocalAdiabaticSchedule(N, eps)
    h = 1e-5
    for s in (0.1, 0.4, 0.5, 0.8):
        t = sched.t_of_s(s)
        rate = (sched.s_of_t(t + h) - sched.s_of_t(t - h)) / (2 * h)
        assert rate == pytest.approx(eps * twolevel.gap(s, N) ** 2, rel=1e-6)


@given(st.floats(2.0, 2.0**40), st.floats(0.01, 0.99))
def test_schedule_invariants(N, eps):
    sched = LocalAdiabaticSchedule(N, eps)
    grid = np.linspace(0, 1, 101)
    ts = [sched.t_of_s(s) for s in grid]
    assert ts[0] == 0.0
    assert ts[-1] == pytest.approx(sched.total_time, rel=1e-14)
    assert all(b > a for a, b in zip(ts, ts[1:]))
    assert abs(sched.total_time * 2 * eps / (math.pi * math.sqrt(N)) - 1) <= 2 / math.sqrt(N)


def test_validation():
    with pytest.raises(InvalidInputError):
        LocalAdiabaticSchedule(1.0, 0.1)
    with pytest.raises(InvalidInputError):
        LocalAdiabaticSchedule(16.0, 1.0)
    with pytest.raises(InvalidInputError):
        LinearSchedule(0.0)
    with pytest.raises(InvalidInputError):
        ConstantSchedule(-0.1)
    with pytest.raises(InvalidInputError):
        staircase_points(LocalAdiabaticSchedule(16.0, 0.5), 0)


def test_linear_and_constant():
    lin = LinearSchedule(10.0)
    assert lin(2.5) == 0.25
    assert lin(11.0) == 1.0
    assert ConstantSchedule(0.3)(1e9) == 0.3


def test_staircase_properties():
    sched = LocalAdiabaticSchedule(32.0, 0.1)
    times, levels = staircase_points(sched, 20)
    assert len(times) == len(levels) == 21
    assert levels[0] == 0.0 and levels[-1] == 1.0
    assert np.all(np.diff(levels) > 0)
    for j in range(1, 21):
        assert staircase_value(times, levels, times[j]) == levels[j]
        assert levels[j] == pytest.approx(sched.s_of_t(times[j]), abs=1e-15)
    grid = np.linspace(0, sched.total_time, 20001)
    gap = max(abs(staircase_value(times, levels, t) - sched(t)) for t in grid)
    assert gap <= np.max(np.diff(levels)) + 1e-15
    # slowest where the gap is smallest: the smallest risers sit around T/2
    jumps = np.diff(levels)[:-1]
    assert abs(int(np.argmin(jumps)) + 1 - 10) <= 1
    assert jumps[0] > 5 * jumps.min()
