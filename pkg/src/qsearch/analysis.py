"""Error probes: staircase bound, splitting error scaling, rotation-rate diagnostics."""

import math

import numpy as np

from . import twolevel
from .errors import InvalidInputError
from .linalg import commutator, operator_norm, unitary_distance
from .plans import Algorithm, analog_total_time, build_plan
from .schedules import LocalAdiabaticSchedule, staircase_points
from .statevector import OracleSpec, aligned_distance, dense_marked_hamiltonian, dense_mixing_hamiltonian
from .twolevel import StepControl, propagate_dense

MAX_PROBE_QUBITS = 8


class _Expm:
    """``exp(-i H t)`` for one Hermitian ``H`` at many ``t`` (one eigensolve)."""

    def __init__(self, h):
        w, v = np.linalg.eigh(h)
        self.w = w
        self.v = v
        self.vh = v.conj().T

    def __call__(self, t):
        return (self.v * np.exp(-1j * self.w * t)) @ self.vh


def _check_probe_size(n_qubits):
    if not 1 <= n_qubits <= MAX_PROBE_QUBITS:
        raise InvalidInputError(f"dense probes need 1 <= n <= {MAX_PROBE_QUBITS}, got {n_qubits}")


def dense_hamiltonians(n_qubits, marked=0):
    """Dense ``(H0, Hf)`` for ``n_qubits``."""
    o = OracleSpec(n_qubits, marked)
    return dense_mixing_hamiltonian(n_qubits), dense_marked_hamiltonian(o)


def commutator_norm(n_qubits):
    h0, hf = dense_hamiltonians(n_qubits)
    return operator_norm(commutator(h0, hf))


def staircase_bound(schedule_or_time, R):
    """``sqrt(2 T / R)``: staircase error bound for ``R`` equal steps over time ``T``."""
    if R < 1:
        raise InvalidInputError(f"R must be >= 1, got {R}")
    total = getattr(schedule_or_time, "total_time", schedule_or_time)
    return math.sqrt(2.0 * float(total) / R)


def staircase_unitaries(n_qubits, epsilon, R, control=StepControl(tol=1e-10, dt=0.01)):
    """Dense ``(U(T), U'(T))``: exact local-adiabatic evolution vs. its ``R``-step staircase."""
    _check_probe_size(n_qubits)
    h0, hf = dense_hamiltonians(n_qubits)
    N = float(1 << n_qubits)
    sched = LocalAdiabaticSchedule(N, epsilon)
    T = sched.total_time

    def ham(t):
        s = sched.s_of_t(min(max(t, 0.0), T))
        return (1.0 - s) * h0 + s * hf

    exact, _ = propagate_dense(ham, np.eye(h0.shape[0], dtype=np.complex128), 0.0, T, control)
    times, levels = staircase_points(sched, R)
    dT = T / R
    stair = np.eye(h0.shape[0], dtype=np.complex128)
    for s in levels[1:]:
        stair = _Expm((1.0 - s) * h0 + s * hf)(dT) @ stair
    return exact, stair


def staircase_distance(n_qubits, epsilon, R, control=StepControl(tol=1e-10, dt=0.01)):
    exact, stair = staircase_unitaries(n_qubits, epsilon, R, control)
    return unitary_distance(exact, stair)


def single_step_errors(n_qubits, dts):
    """``[(dT, ||exp(-i(H0+Hf)dT) - exp(-i H0 dT) exp(-i Hf dT)||)]``."""
    _check_probe_size(n_qubits)
    h0, hf = dense_hamiltonians(n_qubits)
    e_sum, e0, ef = _Expm(h0 + hf), _Expm(h0), _Expm(hf)
    return [(float(dt), unitary_distance(e_sum(dt), e0(dt) @ ef(dt))) for dt in dts]


def trotter_error_probe(n_qubits, R_list, family=Algorithm.ANALOG, epsilon=None):
    """Dense splitting error of a whole run for each ``R`` in ``R_list``.

    ``ANALOG``: ``||exp(-i(H0+Hf)T) - (exp(-i H0 dT) exp(-i Hf dT))^R||`` with
    ``T = (pi/2) sqrt(N)``. ``ADIABATIC``: ``||prod_j U'_j - prod_j U''_j||``
    with ``U'_j = exp(-i H_j dT)`` and ``U''_j`` its split form.
    """
    _check_probe_size(n_qubits)
    family = Algorithm.parse(family)
    h0, hf = dense_hamiltonians(n_qubits)
    N = float(1 << n_qubits)
    e0, ef = _Expm(h0), _Expm(hf)
    out = []
    if family is Algorithm.ANALOG:
        T = analog_total_time(N)
        exact = _Expm(h0 + hf)(T)
        for R in R_list:
            dT = T / R
            split = np.linalg.matrix_power(e0(dT) @ ef(dT), int(R))
            out.append((int(R), unitary_distance(exact, split)))
        return out
    if family is Algorithm.ADIABATIC:
        if epsilon is None:
            raise InvalidInputError("the adiabatic probe needs epsilon")
        sched = LocalAdiabaticSchedule(N, epsilon)
        for R in R_list:
            _, levels = staircase_points(sched, int(R))
            dT = sched.total_time / R
            whole = np.eye(h0.shape[0], dtype=np.complex128)
            split = whole.copy()
            for s in levels[1:]:
                whole = _Expm((1.0 - s) * h0 + s * hf)(dT) @ whole
                split = e0((1.0 - s) * dT) @ ef(s * dT) @ split
            out.append((int(R), unitary_distance(whole, split)))
        return out
    raise InvalidInputError("the Trotter probe applies to the analog and adiabatic families")


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.any(x <= 0) or np.any(y <= 0):
        raise InvalidInputError("log-log fit needs at least two positive points")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def plan_unitary_error(plan, control=StepControl()):
    """Operator-norm error of the executed steps against the ideal evolution on the plane.

    Analog: ideal is ``exp(-i(H0+Hf)T)`` with ``T`` the plan's total time;
    adiabatic: ideal is the exact evolution under the local schedule. Outside
    span{|s>,|m>} both act as the same phase, so the plane carries the whole
    error. Returns ``None`` for Grover plans.
    """
    if plan.algorithm is Algorithm.GROVER:
        return None
    N = plan.N
    dt0s = np.array([st.dt0 for st in plan.steps])
    dtfs = np.array([st.dtf for st in plan.steps])
    cols = [twolevel.trajectory(np.array(e, dtype=np.complex128), N, dt0s, dtfs)[-1] for e in ([1, 0], [0, 1])]
    product = np.column_stack(cols)
    if plan.algorithm is Algorithm.ANALOG:
        ideal = twolevel.constant_propagator(0.5, N, 2.0 * plan.total_time)
    else:
        ideal = twolevel.ode_unitary(plan.schedule, N, plan.total_time, control=control)
    return unitary_distance(ideal, product)


def adiabatic_angle_profile(N, epsilon, samples=41, control=StepControl()):
    """``(times, arcsin|<m|psi(t)>|)`` along the exact local-adiabatic evolution."""
    sched = LocalAdiabaticSchedule(N, epsilon)
    times = np.linspace(0.0, sched.total_time, samples)
    states = twolevel.ode_trajectory(twolevel.uniform(N), sched, times, control)
    angles = np.array([math.asin(min(1.0, abs(st.amplitudes[0]))) for st in states])
    return times, angles


def rate_constancy(times, angles, lo=0.1, hi=0.9, windows=8):
    """Fit the angle-vs-time slope on ``[lo T, hi T]`` and check it window by window.

    Returns ``(fitted_slope, max_relative_window_deviation)``.
    """
    times = np.asarray(times)
    angles = np.asarray(angles)
    T = times[-1]
    mask = (times >= lo * T - 1e-12) & (times <= hi * T + 1e-12)
    t_mid, a_mid = times[mask], angles[mask]
    slope = float(np.polyfit(t_mid, a_mid, 1)[0])
    edges = np.linspace(lo * T, hi * T, windows + 1)
    worst = 0.0
    for w0, w1 in zip(edges, edges[1:]):
        sel = (t_mid >= w0 - 1e-9) & (t_mid <= w1 + 1e-9)
        if sel.sum() < 2:
            raise InvalidInputError("too few samples per window; increase samples")
        local = float(np.polyfit(t_mid[sel], a_mid[sel], 1)[0])
        worst = max(worst, abs(local / slope - 1.0))
    return slope, worst


def ground_state_angular_velocity(s, N, total_time, h=1e-6):
    """``d alpha / dt`` of the instantaneous ground state under ``s = t / T``."""
    lo, hi = max(0.0, s - h), min(1.0, s + h)
    da = twolevel.ground_state_angle(hi, N) - twolevel.ground_state_angle(lo, N)
    return da / (hi - lo) / total_time


def nearest_ground_state(tl, grid=2001, refine=60):
    """``(s, distance)`` minimizing the phase distance from ``tl`` to ``|E0;s>``."""
    N = tl.N

    def dist(s):
        g0, _ = twolevel.eigenstates(s, N)
        return aligned_distance(tl.amplitudes, g0.astype(np.complex128))

    ss = np.linspace(0.0, 1.0, grid)
    vals = [dist(s) for s in ss]
    k = int(np.argmin(vals))
    lo, hi = ss[max(0, k - 1)], ss[min(grid - 1, k + 1)]
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(refine):
        x1 = hi - golden * (hi - lo)
        x2 = lo + golden * (hi - lo)
        if dist(x1) < dist(x2):
            hi = x2
        else:
            lo = x1
    s_best = 0.5 * (lo + hi)
    best = min((vals[k], ss[k]), (dist(s_best), s_best))
    return best[1], best[0]


def plan_for(algorithm, n_qubits, epsilon=None, steps=None):
    return build_plan(algorithm, n_qubits, epsilon=epsilon, steps=steps)
