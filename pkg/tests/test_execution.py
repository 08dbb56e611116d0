import math

import numpy as np
import pytest

from qsearch import twolevel
from qsearch.errors import CapacityError, InvalidInputError
from qsearch.execution import (
    REPORT_COLUMNS,
    check_capacity,
    coefficient_angle,
    execute_plan,
    parse_engine,
    rotation_angle,
)
from qsearch.plans import Algorithm, build_plan
from qsearch.statevector import OracleSpec, phase_distance


@pytest.mark.parametrize(
    "alg,n,eps",
    [("grover", 6, None), ("analog", 6, 0.3), ("adiabatic", 5, 0.5)],
)
def test_engines_agree(alg, n, eps):
    plan = build_plan(alg, n, eps)
    o = OracleSpec(n, 11)
    reps = {e: execute_plan(plan, e, o) for e in ("statevector", "gates", "twolevel")}
    base = reps["statevector"]
    for rep in reps.values():
        np.testing.assert_allclose(rep.dist, base.dist, atol=1e-10)
        np.testing.assert_allclose(rep.succ_prob, base.succ_prob, atol=1e-10)
        np.testing.assert_allclose(rep.alpha_meas, base.alpha_meas, atol=1e-8)
    # the gate engine applies -G for Grover, so compare states up to phase
    full = reps["statevector"].final_state
    gates = reps["gates"].final_state
    assert phase_distance(full, gates) < 1e-10
    assert phase_distance(full, twolevel.embed(reps["twolevel"].final_state, o)) < 1e-10


def test_grover_n2_lands_on_marked():
    rep = execute_plan(build_plan("grover", 2), "statevector", OracleSpec(2, 1))
    assert rep.plan.R == 1
    assert rep.final_distance <= 1e-12
    assert rep.final_probability == pytest.approx(1.0, abs=1e-12)


def test_analog_tracks_prediction():
    plan = build_plan("analog", 10, 0.1)
    rep = execute_plan(plan, "twolevel", OracleSpec(10, 0))
    assert rep.final_distance <= 0.3
    assert np.max(np.abs(rep.alpha_meas - rep.alpha_pred)) <= 5e-3


def test_adiabatic_within_two_epsilon():
    eps = 0.2
    rep = execute_plan(build_plan("adiabatic", 10, eps), "twolevel", OracleSpec(10, 0), record=False)
    assert rep.final_distance <= 2 * eps
    assert rep.final_probability >= 1 - (2 * eps) ** 2


def test_record_shape_and_calls():
    plan = build_plan("analog", 6, 0.4)
    rep = execute_plan(plan, "statevector", OracleSpec(6, 3))
    assert len(rep.j) == plan.R + 1
    assert list(rep.j) == list(range(plan.R + 1))
    assert np.all(np.diff(rep.oracle_calls) >= 0)
    assert rep.total_calls == 2 * plan.R
    short = execute_plan(plan, "statevector", OracleSpec(6, 3), record=False)
    assert list(short.j) == [0, plan.R]
    assert short.final_distance == pytest.approx(rep.final_distance, abs=1e-14)


def test_grover_call_pricing():
    plan = build_plan("grover", 8)
    o = OracleSpec(8, 9)
    assert execute_plan(plan, "statevector", o, record=False).total_calls == plan.R
    assert execute_plan(plan, "twolevel", o, record=False).total_calls == plan.R
    assert execute_plan(plan, "gates", o, record=False).total_calls == 2 * plan.R


def test_csv_layout():
    plan = build_plan("adiabatic", 3, 0.6)
    rep = execute_plan(plan, "statevector", OracleSpec(3, 2))
    text = rep.to_csv([("alg", "adiabatic")])
    lines = text.splitlines()
    assert lines[0] == "# alg=adiabatic"
    assert lines[1] == ",".join(REPORT_COLUMNS)
    body = [ln for ln in lines if not ln.startswith("#")][1:]
    assert len(body) == plan.R + 1
    assert all(len(ln.split(",")) == len(REPORT_COLUMNS) for ln in body)
    assert lines[-1] == f"# total_oracle_calls={2 * plan.R}"
    assert float(body[-1].split(",")[2]) == 1.0


def test_capacity_and_input_errors():
    with pytest.raises(CapacityError):
        check_capacity("statevector", 40)
    with pytest.raises(CapacityError):
        check_capacity("gates", 40)
    check_capacity("twolevel", 40)
    with pytest.raises(InvalidInputError):
        parse_engine("qpu")
    with pytest.raises(InvalidInputError):
        execute_plan(build_plan("grover", 4), "statevector", OracleSpec(5, 0))
    assert parse_engine("Two-Level") == "twolevel"


def test_twolevel_large_register():
    rep = execute_plan(build_plan("grover", 40), "twolevel", OracleSpec(40, 12345), record=False)
    assert rep.final_distance < 2 / math.sqrt(2.0**40)


def test_angle_helpers():
    assert rotation_angle(1.0) == 0.0
    assert rotation_angle(0.0) == pytest.approx(math.pi / 2)
    N = 64.0
    a, b = twolevel.plane_coefficients(N)
    # |s> itself: c_m = a, c_perp = b
    assert coefficient_angle(a, b, N) == pytest.approx(0.0, abs=1e-15)
    assert coefficient_angle(1.0, 0.0, N) == pytest.approx(math.pi / 2)
    # exact analog state cos(x)|s> - i sin(x)|m> has coefficient angle x
    x = 0.37
    tl = twolevel.analog_exact_state(x * math.sqrt(N), N)
    assert coefficient_angle(tl.c_m, tl.c_perp, N) == pytest.approx(x, abs=1e-12)


def test_deterministic_reports():
    plan = build_plan(Algorithm.ANALOG, 7, 0.25)
    o = OracleSpec(7, 100)
    assert execute_plan(plan, "statevector", o).to_csv() == execute_plan(plan, "statevector", o).to_csv()
