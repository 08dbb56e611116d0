"""Hot inner loops.

Each statevector kernel exists twice: a loop form compiled by numba (``*_nb``)
and a vectorized numpy form (``*_np``). The public names are bound to one of
them at import time according to ``qsearch._jit.USE_NUMBA``. The sequential
two-level kernels have no vectorized form; without numba they run as plain
Python.

All statevector kernels work in place on a contiguous complex128 array whose
length is a power of two. Reductions are serial so results do not depend on
thread scheduling.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, compile_kernel


# --------------------------------------------------------------------------
# O(N) rank-one kernels


def _uniform_overlap_loop(psi):
    acc = 0j
    for x in range(psi.shape[0]):
        acc += psi[x]
    return acc / math.sqrt(psi.shape[0])


def _uniform_overlap_np(psi):
    return complex(psi.sum()) / math.sqrt(psi.shape[0])


def _marked_evolve_loop(psi, m, t):
    phase = complex(math.cos(t), -math.sin(t))
    keep = psi[m]
    for x in range(psi.shape[0]):
        psi[x] *= phase
    psi[m] = keep


def _marked_evolve_np(psi, m, t):
    keep = psi[m]
    psi *= complex(math.cos(t), -math.sin(t))
    psi[m] = keep


def _mixing_evolve_loop(psi, t):
    n = psi.shape[0]
    acc = 0j
    for x in range(n):
        acc += psi[x]
    phase = complex(math.cos(t), -math.sin(t))
    shift = (1.0 - phase) * acc / n
    for x in range(n):
        psi[x] = phase * psi[x] + shift


def _mixing_evolve_np(psi, t):
    phase = complex(math.cos(t), -math.sin(t))
    shift = (1.0 - phase) * complex(psi.sum()) / psi.shape[0]
    psi *= phase
    psi += shift


def _reflect_uniform_loop(psi):
    n = psi.shape[0]
    acc = 0j
    for x in range(n):
        acc += psi[x]
    shift = 2.0 * acc / n
    for x in range(n):
        psi[x] -= shift


def _reflect_uniform_np(psi):
    psi -= 2.0 * complex(psi.sum()) / psi.shape[0]


def _hamiltonian_step_loop(psi, m, dtf, dt0):
    # exp(-i H0 dt0) exp(-i Hf dtf) in two passes; <s|psi> is invariant under
    # the H0 factor, so the sum from the first pass is the returned overlap.
    n = psi.shape[0]
    pf = complex(math.cos(dtf), -math.sin(dtf))
    keep = psi[m]
    acc = 0j
    for x in range(n):
        psi[x] *= pf
        acc += psi[x]
    acc += keep - psi[m]
    psi[m] = keep
    p0 = complex(math.cos(dt0), -math.sin(dt0))
    shift = (1.0 - p0) * acc / n
    for x in range(n):
        psi[x] = p0 * psi[x] + shift
    return acc / math.sqrt(n)


def _hamiltonian_step_np(psi, m, dtf, dt0):
    _marked_evolve_np(psi, m, dtf)
    total = complex(psi.sum())
    p0 = complex(math.cos(dt0), -math.sin(dt0))
    psi *= p0
    psi += (1.0 - p0) * total / psi.shape[0]
    return total / math.sqrt(psi.shape[0])


def _grover_step_loop(psi, m):
    # -U0 Uf; returns <s|psi> after the step (equal to <s|Uf psi>).
    n = psi.shape[0]
    psi[m] = -psi[m]
    acc = 0j
    for x in range(n):
        acc += psi[x]
    shift = 2.0 * acc / n
    for x in range(n):
        psi[x] = shift - psi[x]
    return acc / math.sqrt(n)


def _grover_step_np(psi, m):
    psi[m] = -psi[m]
    total = complex(psi.sum())
    np.negative(psi, out=psi)
    psi += 2.0 * total / psi.shape[0]
    return total / math.sqrt(psi.shape[0])


def _fwht_loop(psi):
    n = psi.shape[0]
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for x in range(start, start + h):
                u = psi[x]
                v = psi[x + h]
                psi[x] = u + v
                psi[x + h] = u - v
        h *= 2
    scale = 1.0 / math.sqrt(n)
    for x in range(n):
        psi[x] *= scale


def _fwht_np(psi):
    n = psi.shape[0]
    h = 1
    while h < n:
        view = psi.reshape(-1, 2, h)
        u = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] *= -1.0
        view[:, 1, :] += u
        h *= 2
    psi *= 1.0 / math.sqrt(n)


# --------------------------------------------------------------------------
# two-level (span{|s>,|m>}) kernels, basis {|m>, |m_perp>}

STEP_HAMILTONIAN = 0
STEP_GROVER = 1


def _two_level_trajectory_loop(c0, a, b, dt0s, dtfs, kind):
    steps = dt0s.shape[0]
    out = np.empty((steps + 1, 2), dtype=np.complex128)
    cm = c0[0]
    cp = c0[1]
    out[0, 0] = cm
    out[0, 1] = cp
    for j in range(steps):
        if kind == STEP_GROVER:
            cm = -cm
            ov = a * cm + b * cp
            cm = 2.0 * ov * a - cm
            cp = 2.0 * ov * b - cp
        else:
            dtf = dtfs[j]
            cp *= complex(math.cos(dtf), -math.sin(dtf))
            dt0 = dt0s[j]
            p0 = complex(math.cos(dt0), -math.sin(dt0))
            ov = a * cm + b * cp
            shift = (1.0 - p0) * ov
            cm = p0 * cm + shift * a
            cp = p0 * cp + shift * b
        out[j + 1, 0] = cm
        out[j + 1, 1] = cp
    return out


SCHEDULE_CONSTANT = 0
SCHEDULE_LINEAR = 1
SCHEDULE_LOCAL = 2


def _schedule_value(t, kind, p0, p1, p2):
    # constant: s = p0; linear: s = t / p0; local adiabatic: p0 = N,
    # p1 = epsilon, p2 = sqrt(N - 1)
    if kind == SCHEDULE_CONSTANT:
        s = p0
    elif kind == SCHEDULE_LINEAR:
        s = t / p0
    else:
        s = 0.5 + math.tan(2.0 * p1 * p2 * t / p0 - math.atan(p2)) / (2.0 * p2)
    if s < 0.0:
        return 0.0
    if s > 1.0:
        return 1.0
    return s


def _rk4_two_level_loop(c0, t0, t1, nsteps, a, b, kind, p0, p1, p2):
    # Integrates i dc/dt = (H(s(t)) - I/2) c; H(s) has unit trace, so the
    # removed half is the exact phase exp(-i (t1 - t0) / 2) restored at the end.
    h = (t1 - t0) / nsteps
    cm = c0[0]
    cp = c0[1]
    ab = a * b
    aa = a * a
    bb = b * b
    for k in range(nsteps):
        t = t0 + k * h
        s1 = _schedule_value(t, kind, p0, p1, p2)
        s2 = _schedule_value(t + 0.5 * h, kind, p0, p1, p2)
        s4 = _schedule_value(t + h, kind, p0, p1, p2)

        h11 = (1.0 - s1) * bb - 0.5
        h12 = -(1.0 - s1) * ab
        h22 = (1.0 - s1) * aa + s1 - 0.5
        k1m = -1j * (h11 * cm + h12 * cp)
        k1p = -1j * (h12 * cm + h22 * cp)

        h11 = (1.0 - s2) * bb - 0.5
        h12 = -(1.0 - s2) * ab
        h22 = (1.0 - s2) * aa + s2 - 0.5
        ym = cm + 0.5 * h * k1m
        yp = cp + 0.5 * h * k1p
        k2m = -1j * (h11 * ym + h12 * yp)
        k2p = -1j * (h12 * ym + h22 * yp)
        ym = cm + 0.5 * h * k2m
        yp = cp + 0.5 * h * k2p
        k3m = -1j * (h11 * ym + h12 * yp)
        k3p = -1j * (h12 * ym + h22 * yp)

        h11 = (1.0 - s4) * bb - 0.5
        h12 = -(1.0 - s4) * ab
        h22 = (1.0 - s4) * aa + s4 - 0.5
        ym = cm + h * k3m
        yp = cp + h * k3p
        k4m = -1j * (h11 * ym + h12 * yp)
        k4p = -1j * (h12 * ym + h22 * yp)

        cm = cm + (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        cp = cp + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    phase = complex(math.cos(0.5 * (t1 - t0)), -math.sin(0.5 * (t1 - t0)))
    out = np.empty(2, dtype=np.complex128)
    out[0] = cm * phase
    out[1] = cp * phase
    return out


# --------------------------------------------------------------------------
# compiled variants and dispatch

uniform_overlap_nb = compile_kernel(_uniform_overlap_loop)
marked_evolve_nb = compile_kernel(_marked_evolve_loop)
mixing_evolve_nb = compile_kernel(_mixing_evolve_loop)
reflect_uniform_nb = compile_kernel(_reflect_uniform_loop)
hamiltonian_step_nb = compile_kernel(_hamiltonian_step_loop)
grover_step_nb = compile_kernel(_grover_step_loop)
fwht_nb = compile_kernel(_fwht_loop)
two_level_trajectory_nb = compile_kernel(_two_level_trajectory_loop)
_schedule_value_nb = compile_kernel(_schedule_value)

if _schedule_value_nb is not _schedule_value:
    # the RK4 loop must call the compiled schedule; rebind in a copy of its globals
    import types

    _rk4_globals = dict(_rk4_two_level_loop.__globals__)
    _rk4_globals["_schedule_value"] = _schedule_value_nb
    rk4_two_level_nb = compile_kernel(
        types.FunctionType(_rk4_two_level_loop.__code__, _rk4_globals, "_rk4_two_level_loop")
    )
else:  # pragma: no cover - numba missing
    rk4_two_level_nb = _rk4_two_level_loop

uniform_overlap_np = _uniform_overlap_np
marked_evolve_np = _marked_evolve_np
mixing_evolve_np = _mixing_evolve_np
reflect_uniform_np = _reflect_uniform_np
hamiltonian_step_np = _hamiltonian_step_np
grover_step_np = _grover_step_np
fwht_np = _fwht_np
two_level_trajectory_py = _two_level_trajectory_loop
rk4_two_level_py = _rk4_two_level_loop

if USE_NUMBA:
    uniform_overlap = uniform_overlap_nb
    marked_evolve = marked_evolve_nb
    mixing_evolve = mixing_evolve_nb
    reflect_uniform = reflect_uniform_nb
    hamiltonian_step = hamiltonian_step_nb
    grover_step = grover_step_nb
    fwht = fwht_nb
    two_level_trajectory = two_level_trajectory_nb
    rk4_two_level = rk4_two_level_nb
else:
    uniform_overlap = uniform_overlap_np
    marked_evolve = marked_evolve_np
    mixing_evolve = mixing_evolve_np
    reflect_uniform = reflect_uniform_np
    hamiltonian_step = hamiltonian_step_np
    grover_step = grover_step_np
    fwht = fwht_np
    two_level_trajectory = two_level_trajectory_py
    rk4_two_level = rk4_two_level_py
