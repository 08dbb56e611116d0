"""Exact dynamics in the invariant plane span{|s>, |m>}.

Coordinates are taken on the orthonormal basis ``{|m>, |m_perp>}`` with

    |m_perp> = (|s> - |m>/sqrt(N)) / sqrt(1 - 1/N),

so ``|s> = a|m> + b|m_perp>`` with ``a = 1/sqrt(N)``, ``b = sqrt(1 - 1/N)``.
``|m_perp>`` is the uniform superposition of the ``N - 1`` unmarked basis
states. ``N`` is a real parameter here and need not be a power of two.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConvergenceError, InvalidInputError, SubspaceViolationError
from .linalg import hermitian_expm
from .statevector import PureState, aligned_distance, fidelity_distance

NORM_TOL = 1e-12


def plane_coefficients(N):
    """``(a, b)`` with ``|s> = a|m> + b|m_perp>``."""
    N = float(N)
    if not N >= 2.0:
        raise InvalidInputError(f"N must be >= 2, got {N}")
    a = 1.0 / math.sqrt(N)
    return a, math.sqrt(1.0 - 1.0 / N)


@dataclass(eq=False)
class TwoLevelState:
    N: float
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        plane_coefficients(self.N)
        self.N = float(self.N)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (2,):
            raise InvalidInputError(f"two-level state needs 2 coordinates, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise InvalidInputError("coordinates must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"state is not normalized (norm^2 = {norm!r})")
        self.amplitudes = amps

    @property
    def c_m(self):
        return complex(self.amplitudes[0])

    @property
    def c_perp(self):
        return complex(self.amplitudes[1])

    def overlap_uniform(self):
        a, b = plane_coefficients(self.N)
        return a * self.amplitudes[0] + b * self.amplitudes[1]


def _fresh(N, amps):
    out = TwoLevelState.__new__(TwoLevelState)
    out.N = float(N)
    out.amplitudes = np.asarray(amps, dtype=np.complex128)
    return out


def uniform(N):
    return TwoLevelState(N, np.array(plane_coefficients(N), dtype=np.complex128))


def marked(N):
    return TwoLevelState(N, np.array([1.0, 0.0], dtype=np.complex128))


def success_probability(tl):
    return min(1.0, abs(tl.amplitudes[0]) ** 2)


def phase_distance(x, y):
    if x.N != y.N:
        raise InvalidInputError(f"N mismatch: {x.N} vs {y.N}")
    return aligned_distance(x.amplitudes, y.amplitudes)


def marked_distance(c_m, c_perp):
    """Phase distance to ``|m>`` from the plane coordinates, without cancellation."""
    return math.hypot(1.0 - abs(c_m), abs(c_perp))


# --------------------------------------------------------------------------
# spectrum


def _check_s(s):
    if not (0.0 <= s <= 1.0):
        raise InvalidInputError(f"s must lie in [0, 1], got {s}")


def hamiltonian_2x2(s, N):
    """``(1-s)(I - |s><s|) + s(I - |m><m|)`` on ``{|m>, |m_perp>}``."""
    _check_s(s)
    a, b = plane_coefficients(N)
    return np.array(
        [
            [(1.0 - s) * b * b, -(1.0 - s) * a * b],
            [-(1.0 - s) * a * b, (1.0 - s) * a * a + s],
        ],
        dtype=np.complex128,
    )


def _gap_and_u(s, N):
    # E1 - E0 = sqrt(1 - 4 (N-1)/N s(1-s)) = sqrt((1 + (N-1) u^2) / N), u = 2s - 1
    u = 2.0 * s - 1.0
    return math.sqrt((1.0 + (N - 1.0) * u * u) / N), u


def eigenvalues(s, N):
    """Closed-form ``(E0, E1)``."""
    _check_s(s)
    N = float(N)
    plane_coefficients(N)
    g, _ = _gap_and_u(s, N)
    # E0 = (1 - g)/2 rewritten without cancellation near s = 0, 1
    e0 = 2.0 * ((N - 1.0) / N) * s * (1.0 - s) / (1.0 + g)
    return e0, 1.0 - e0


def gap(s, N):
    _check_s(s)
    plane_coefficients(N)
    return _gap_and_u(s, float(N))[0]


def ground_state_angle(s, N):
    """Exact ``arctan(s / (sqrt(N)(E1(s) - s)))``, continuous at ``s = 1``.

    Uses ``E1 - s = 2 s (1-s) / (N (g + u))`` so the ratio becomes
    ``sqrt(N)(g + u) / (2(1-s))``, with ``g + u`` evaluated stably for u < 0.
    """
    _check_s(s)
    N = float(N)
    plane_coefficients(N)
    g, u = _gap_and_u(s, N)
    if u >= 0.0:
        g_plus_u = g + u
    else:
        g_plus_u = (4.0 * s * (1.0 - s) / N) / (g - u)
    return math.atan2(math.sqrt(N) * g_plus_u, 2.0 * (1.0 - s))


def ground_state_angle_approx(s, N):
    """Large-N form ``(1/2) arctan(2s / (sqrt(N)(1 - 2s)))`` continued through s = 1/2."""
    _check_s(s)
    N = float(N)
    plane_coefficients(N)
    return 0.5 * math.atan2(2.0 * s, math.sqrt(N) * (1.0 - 2.0 * s))


def eigenstates(s, N):
    """Normalized ``(|E0;s>, |E1;s>)`` on ``{|m>, |m_perp>}``.

    Built from the closed forms ``sqrt(N)(E_k - s)|s> + s|m>`` with ``k`` the
    other level; where that vector vanishes (``s = 0`` for the excited state)
    the orthogonal complement of the ground state is used instead.
    """
    e0, e1 = eigenvalues(s, N)
    a, b = plane_coefficients(N)
    rootn = math.sqrt(float(N))
    alpha = ground_state_angle(s, N)
    # ground state as cos(alpha)|s> + sin(alpha)|m>, normalized
    v0 = np.array([math.cos(alpha) * a + math.sin(alpha), math.cos(alpha) * b])
    v0 /= np.linalg.norm(v0)
    w = rootn * (e0 - s)
    v1 = np.array([w * a + s, w * b])
    nv1 = np.linalg.norm(v1)
    if nv1 < 1e-8:
        v1 = np.array([-v0[1], v0[0]])
    else:
        v1 /= nv1
    return v0.astype(np.complex128), v1.astype(np.complex128)


# --------------------------------------------------------------------------
# closed-form propagators


def analog_exact_state(t, N):
    """``exp(-i (H0 + Hf) t)|s> = exp(-it)[cos(t/sqrt N)|s> + i sin(t/sqrt N)|m>]``."""
    if not (t >= 0.0 and math.isfinite(t)):
        raise InvalidInputError(f"t must be finite and >= 0, got {t}")
    a, b = plane_coefficients(N)
    x = a * t
    phase = complex(math.cos(t), -math.sin(t))
    c, sn = math.cos(x), math.sin(x)
    return _fresh(N, [phase * (c * a + 1j * sn), phase * c * b])


def marked_step_matrix(t):
    return np.array([[1.0, 0.0], [0.0, complex(math.cos(t), -math.sin(t))]], dtype=np.complex128)


def mixing_step_matrix(t, N):
    a, b = plane_coefficients(N)
    sv = np.array([a, b])
    phase = complex(math.cos(t), -math.sin(t))
    return phase * (np.eye(2) + (1.0 / phase - 1.0) * np.outer(sv, sv))


def grover_matrix(N):
    a, b = plane_coefficients(N)
    sv = np.array([a, b])
    uf = np.diag([-1.0, 1.0])
    u0 = np.eye(2) - 2.0 * np.outer(sv, sv)
    return (-u0 @ uf).astype(np.complex128)


def trajectory(c0, N, dt0s, dtfs, grover=False):
    """All intermediate coordinates of a step sequence, shape ``(R + 1, 2)``."""
    a, b = plane_coefficients(N)
    kind = kernels.STEP_GROVER if grover else kernels.STEP_HAMILTONIAN
    return kernels.two_level_trajectory(
        np.ascontiguousarray(c0, dtype=np.complex128),
        a,
        b,
        np.ascontiguousarray(dt0s, dtype=np.float64),
        np.ascontiguousarray(dtfs, dtype=np.float64),
        kind,
    )


# --------------------------------------------------------------------------
# bridge to the statevector engine


def embed(tl, o):
    if tl.N != float(o.dim):
        raise InvalidInputError(f"two-level N={tl.N} does not match oracle dimension {o.dim}")
    amps = np.full(o.dim, tl.amplitudes[1] / math.sqrt(tl.N - 1.0), dtype=np.complex128)
    amps[o.marked] = tl.amplitudes[0]
    return PureState(o.n_qubits, amps)


def project(psi, o, tol=1e-8):
    if psi.n_qubits != o.n_qubits:
        raise InvalidInputError("state and oracle dimensions differ")
    amps = psi.amplitudes
    N = float(o.dim)
    cm = amps[o.marked]
    rest = complex(amps.sum()) - cm
    cp = rest / math.sqrt(N - 1.0)
    # component orthogonal to the plane, formed explicitly to avoid cancellation
    off = amps - cp / math.sqrt(N - 1.0)
    off[o.marked] = 0.0
    residual = float(np.linalg.norm(off))
    if residual > tol:
        raise SubspaceViolationError(f"state leaves span{{|s>,|m>}} (residual {residual:.3e} > {tol:.1e})")
    return _fresh(N, [cm, cp])


# --------------------------------------------------------------------------
# reference integrator


@dataclass(frozen=True)
class StepControl:
    """Fixed-step RK4 refined by step doubling.

    The step count starts at ``ceil(duration / dt)`` and doubles until two
    successive results differ by at most ``tol`` (max-abs over components).
    """

    tol: float = 1e-9
    dt: float = 0.05
    max_steps: int = 1 << 26


def _refine(run, duration, control):
    if control.tol <= 0 or control.dt <= 0:
        raise ConvergenceError("step control needs positive tol and dt", tol=control.tol, dt=control.dt)
    steps = max(1, math.ceil(abs(duration) / control.dt))
    prev = run(steps)
    change = math.inf
    while True:
        steps *= 2
        if steps > control.max_steps:
            raise ConvergenceError(
                f"step doubling did not reach tol={control.tol:g} within "
                f"{control.max_steps} steps (last change {change:.3e} at {steps // 2} steps)",
                steps=steps // 2,
                last_change=change,
                tol=control.tol,
            )
        cur = run(steps)
        change = float(np.max(np.abs(cur - prev)))
        if change <= control.tol:
            return cur, {"steps": steps, "doubling_change": change}
        prev = cur


def propagate_dense(hamiltonian, y0, t0, t1, control=StepControl()):
    """Integrate ``i dy/dt = H(t) y`` for a dense ``H(t)``; ``y0`` may be a matrix.

    A constant energy shift ``tr H(t0) / d`` is removed during integration and
    restored exactly as a phase.
    """
    y0 = np.asarray(y0, dtype=np.complex128)
    d = y0.shape[0]
    shift = float(np.trace(hamiltonian(t0)).real) / d
    eye = np.eye(d)

    def rhs(t, y):
        return -1j * ((hamiltonian(t) - shift * eye) @ y)

    def run(steps):
        h = (t1 - t0) / steps
        y = y0.copy()
        for k in range(steps):
            t = t0 + k * h
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return y * complex(math.cos(shift * (t1 - t0)), -math.sin(shift * (t1 - t0)))

    if t1 == t0:
        return y0.copy(), {"steps": 0, "doubling_change": 0.0}
    return _refine(run, t1 - t0, control)


def ode_propagate(initial, schedule, t_end, t_start=0.0, control=StepControl(), return_info=False):
    """Evolve ``initial`` under ``H(s(t))`` from ``t_start`` to ``t_end``.

    ``schedule`` is a schedule object from :mod:`qsearch.schedules` (compiled
    fast path) or any callable ``t -> s``.
    """
    total = getattr(schedule, "total_time", None)
    if total is not None and t_end > total * (1.0 + 1e-12) + 1e-12:
        raise InvalidInputError(f"t_end={t_end} exceeds the schedule duration {total}")
    if t_end < t_start:
        raise InvalidInputError("t_end must not precede t_start")
    N = initial.N
    a, b = plane_coefficients(N)
    c0 = np.ascontiguousarray(initial.amplitudes)
    params = getattr(schedule, "kernel_params", None)
    if params is not None:
        kind, p0, p1, p2 = params()

        def run(steps):
            return kernels.rk4_two_level(c0, float(t_start), float(t_end), steps, a, b, kind, p0, p1, p2)

        if t_end == t_start:
            out, info = c0.copy(), {"steps": 0, "doubling_change": 0.0}
        else:
            out, info = _refine(run, t_end - t_start, control)
    else:
        out, info = propagate_dense(
            lambda t: hamiltonian_2x2(min(1.0, max(0.0, schedule(t))), N), c0, t_start, t_end, control
        )
    info["norm_drift"] = abs(float(np.linalg.norm(out)) - 1.0)
    state = _fresh(N, out)
    return (state, info) if return_info else state


def ode_trajectory(initial, schedule, times, control=StepControl()):
    """States at each of the increasing ``times`` (the first is the start time)."""
    times = [float(t) for t in times]
    out = [initial]
    for t0, t1 in zip(times, times[1:]):
        out.append(ode_propagate(out[-1], schedule, t1, t_start=t0, control=control))
    return out


def ode_unitary(schedule, N, t_end, t_start=0.0, control=StepControl()):
    """2x2 propagator of ``H(s(t))`` on ``{|m>, |m_perp>}``."""
    cols = []
    for basis in ([1.0, 0.0], [0.0, 1.0]):
        st = _fresh(N, basis)
        cols.append(ode_propagate(st, schedule, t_end, t_start=t_start, control=control).amplitudes)
    return np.column_stack(cols)


def constant_propagator(s, N, t):
    """``exp(-i H(s) t)`` on the plane via the dense eigensolver."""
    return hermitian_expm(hamiltonian_2x2(s, N), t)
