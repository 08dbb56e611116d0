import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsearch.errors import InvalidInputError, InvalidParameterError
from qsearch.plans import (
    Algorithm,
    build_plan,
    default_steps,
    floor_count,
    predicted_angle,
    read_plan_csv,
)
from qsearch.schedules import LocalAdiabaticSchedule


def test_grover_plan():
    plan = build_plan("grover", 10)
    assert plan.R == 25
    assert all(st.dt0 == math.pi and st.dtf == math.pi and st.s is None for st in plan.steps)


def test_analog_plan():
    plan = build_plan(Algorithm.ANALOG, 10, 0.1)
    assert plan.R == 320
    assert all(st.dt0 == st.dtf == 0.1 * math.pi / 2 for st in plan.steps)
    assert plan.steps[0].dt0 == pytest.approx(0.15708, abs=1e-5)


def test_adiabatic_plan():
    plan = build_plan("adiabatic", 6, 0.5)
    assert plan.R == 64
    sched = LocalAdiabaticSchedule(64.0, 0.5)
    dT = sched.t_of_s(1.0) / 64
    for j, st in enumerate(plan.steps, 1):
        assert st.dt0 + st.dtf == pytest.approx(dT, rel=1e-15)
        assert st.s == (1.0 if j == 64 else sched.s_of_t(j * dT))
    assert plan.steps[-1].dt0 == pytest.approx(0.0, abs=1e-12)
    assert plan.times()[-1] == sched.total_time


def test_floor_snaps_representation_error():
    assert 32 / 0.2**3 < 4000
    assert floor_count(32 / 0.2**3) == 4000
    assert floor_count(3.7) == 3
    assert default_steps("adiabatic", 1024.0, 0.2) == 4000
    assert default_steps("adiabatic", 4.0, 0.5) == 16


def test_plan_validation():
    with pytest.raises(InvalidInputError):
        build_plan("analog", 4)
    with pytest.raises(InvalidInputError):
        build_plan("adiabatic", 4, 1.5)
    with pytest.raises(InvalidInputError):
        build_plan("bogus", 4)
    with pytest.raises(InvalidParameterError):
        build_plan("grover", 1)  # floor(pi/4 * sqrt 2) = 1, fine
        build_plan("analog", 1, 0.9, steps=0)


def test_grover_n1_has_one_step():
    assert build_plan("grover", 1).R == 1


def test_predicted_angles():
    g = build_plan("grover", 10)
    assert predicted_angle(g, 5) == 0.3125
    a = build_plan("analog", 10, 0.1)
    assert predicted_angle(a, 0) == 0.0
    ad = build_plan("adiabatic", 10, 0.5)
    assert ad.R == 256
    assert predicted_angle(ad, 256) == pytest.approx(math.pi / 2, abs=1e-15)
    with pytest.raises(InvalidInputError):
        predicted_angle(g, 26)


def test_override_keeps_total_time():
    p = build_plan("analog", 8, 0.2, steps=40)
    assert p.overridden and p.R == 40
    assert p.total_time == pytest.approx(math.pi / 2 * 16, rel=1e-15)
    assert predicted_angle(p, 40) == pytest.approx(math.pi / 2, rel=1e-15)
    q = build_plan("adiabatic", 8, 0.5, steps=10)
    assert q.times()[-1] == LocalAdiabaticSchedule(256.0, 0.5).total_time
    assert predicted_angle(q, 5) == pytest.approx(math.pi / 4)


def test_csv_round_trip():
    for alg, eps in (("grover", None), ("analog", 0.3), ("adiabatic", 0.6)):
        plan = build_plan(alg, 5, eps)
        text = plan.to_csv()
        assert text.startswith("j,s,dt0,dtf\n")
        back = read_plan_csv(text)
        assert tuple(back) == plan.steps
    assert build_plan("analog", 3, 0.5).to_csv().splitlines()[1].split(",")[1] == ""
    with pytest.raises(InvalidInputError):
        read_plan_csv("a,b\n")


@settings(max_examples=40)
@given(st.integers(1, 30), st.floats(0.05, 0.95))
def test_plan_invariants(n, eps):
    N = float(1 << n)
    for alg in Algorithm:
        R = default_steps(alg, N, eps)
        if not 1 <= R <= 5000:
            continue
        plan = build_plan(alg, n, eps)
        assert plan.R == R
        times = plan.times()
        assert len(times) == plan.R + 1
        assert all(b > a for a, b in zip(times, times[1:]))
        if alg is Algorithm.ADIABATIC:
            ss = [st.s for st in plan.steps]
            assert all(b >= a for a, b in zip(ss, ss[1:])) and ss[-1] == 1.0
