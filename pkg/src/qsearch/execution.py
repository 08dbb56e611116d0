"""Run a :class:`~qsearch.plans.StepPlan` on one of the three engines.

Each step applies the ``H_f`` factor first and then the ``H_0`` factor,
starting from ``|s>``. Grover plans use ``G = -U_0 U_f`` directly on the
statevector and two-level engines (one query per step); the gate engine runs
the compiled ``exp(-i H0 pi) exp(-i Hf pi)`` circuit, which equals ``-G`` and
costs two queries per step.

The measured angle follows the parametrization of each predicted angle. Grover
iterations rotate the orthonormal plane, so it is ``arccos |<s|psi>|``. The
Hamiltonian algorithms write the state as ``A|s> + B|m>`` (non-orthogonal
pair), so it is ``atan2(|B|, |A|)``; this is exact for the analog evolution
and is the ground-state angle used by the adiabatic schedule.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels, twolevel
from ._format import fmt, header_lines
from .circuit import MAX_REGISTER_QUBITS, apply_gates_inplace, compile_step
from .errors import CapacityError, InvalidInputError, SubspaceViolationError
from .plans import Algorithm, predicted_angle
from .statevector import MAX_QUBITS, OracleCounter, PureState

ENGINES = ("statevector", "gates", "twolevel")
MAX_TWO_LEVEL_QUBITS = 62

REPORT_COLUMNS = (
    "j",
    "t",
    "s",
    "alpha_pred",
    "alpha_meas",
    "re_overlap",
    "im_overlap",
    "succ_prob",
    "dist",
    "oracle_calls",
)


def parse_engine(name):
    key = str(name).lower().replace("-", "").replace("_", "")
    if key not in ENGINES:
        raise InvalidInputError(f"unknown engine {name!r}; expected one of {ENGINES}")
    return key


def check_capacity(engine, n_qubits):
    engine = parse_engine(engine)
    limit = {"statevector": MAX_QUBITS, "gates": MAX_REGISTER_QUBITS, "twolevel": MAX_TWO_LEVEL_QUBITS}[engine]
    if n_qubits > limit:
        hint = "" if engine == "twolevel" else "; use --engine twolevel for larger N"
        raise CapacityError(f"{engine} engine supports at most {limit} qubits, got {n_qubits}{hint}")


@dataclass
class RunReport:
    plan: object
    engine: str
    marked: int
    j: np.ndarray
    t: np.ndarray
    s: np.ndarray
    alpha_pred: np.ndarray
    alpha_meas: np.ndarray
    overlap: np.ndarray
    succ_prob: np.ndarray
    dist: np.ndarray
    oracle_calls: np.ndarray
    final_state: object = field(repr=False)
    wall_time: float = 0.0

    @property
    def final_distance(self):
        return float(self.dist[-1])

    @property
    def final_probability(self):
        return float(self.succ_prob[-1])

    @property
    def total_calls(self):
        return int(self.oracle_calls[-1])

    def rows(self):
        adiabatic = self.plan.algorithm is Algorithm.ADIABATIC
        for k in range(len(self.j)):
            yield (
                int(self.j[k]),
                fmt(self.t[k]),
                fmt(self.s[k]) if adiabatic else "",
                fmt(self.alpha_pred[k]),
                fmt(self.alpha_meas[k]),
                fmt(self.overlap[k].real),
                fmt(self.overlap[k].imag),
                fmt(self.succ_prob[k]),
                fmt(self.dist[k]),
                int(self.oracle_calls[k]),
            )

    def to_csv(self, header=()):
        out = [header_lines(header), ",".join(REPORT_COLUMNS) + "\n"]
        out.extend(",".join(str(v) for v in row) + "\n" for row in self.rows())
        out.append(
            header_lines(
                [
                    ("final_dist", fmt(self.final_distance)),
                    ("final_succ_prob", fmt(self.final_probability)),
                    ("total_oracle_calls", self.total_calls),
                ]
            )
        )
        return "".join(out)


def rotation_angle(ov):
    """Angle between ``|psi>`` and ``|s>`` from ``<s|psi>``."""
    return math.acos(min(1.0, abs(ov)))


def coefficient_angle(cm, c_perp, N):
    """``atan2(|B|, |A|)`` for ``|psi> = A|s> + B|m>``."""
    a, b = twolevel.plane_coefficients(N)
    A = c_perp / b
    return math.atan2(abs(cm - a * A), abs(A))


def _metrics(cm, ov, N, grover):
    a, b = twolevel.plane_coefficients(N)
    c_perp = (ov - a * cm) / b
    angle = rotation_angle(ov) if grover else coefficient_angle(cm, c_perp, N)
    return min(1.0, abs(cm) ** 2), twolevel.marked_distance(cm, c_perp), angle


def execute_plan(plan, engine, oracle, record=True):
    """Execute ``plan`` from ``|s>`` and return a :class:`RunReport`."""
    engine = parse_engine(engine)
    if oracle.n_qubits != plan.n_qubits:
        raise InvalidInputError(
            f"oracle has {oracle.n_qubits} qubits but the plan has {plan.n_qubits}"
        )
    check_capacity(engine, plan.n_qubits)
    R = plan.R
    grover = plan.algorithm is Algorithm.GROVER
    dt0s = np.array([st.dt0 for st in plan.steps])
    dtfs = np.array([st.dtf for st in plan.steps])

    cms = np.empty(R + 1, dtype=np.complex128)
    ovs = np.empty(R + 1, dtype=np.complex128)
    calls = np.zeros(R + 1, dtype=np.int64)
    counter = OracleCounter()
    started = time.perf_counter()

    if engine == "twolevel":
        a, b = twolevel.plane_coefficients(plan.N)
        traj = twolevel.trajectory(np.array([a, b]), plan.N, dt0s, dtfs, grover=grover)
        cms[:] = traj[:, 0]
        ovs[:] = a * traj[:, 0] + b * traj[:, 1]
        per_step = 1 if grover else 2
        calls[:] = per_step * np.arange(R + 1)
        counter.charge(per_step * R)
        final = twolevel._fresh(plan.N, traj[-1])
    else:
        N = 1 << plan.n_qubits
        m = oracle.marked
        if engine == "statevector":
            psi = np.full(N, 1.0 / math.sqrt(N), dtype=np.complex128)
            amps = psi
        else:
            amps = np.zeros(2 * N, dtype=np.complex128)
            amps[:N] = 1.0 / math.sqrt(N)
            psi = amps[:N]
        cms[0] = psi[m]
        ovs[0] = kernels.uniform_overlap(psi)
        for j in range(1, R + 1):
            if engine == "statevector":
                if grover:
                    ov = kernels.grover_step(psi, m)
                    counter.charge(1)
                else:
                    ov = kernels.hamiltonian_step(psi, m, dtfs[j - 1], dt0s[j - 1])
                    counter.charge(2)
            else:
                apply_gates_inplace(amps, N, compile_step(dtfs[j - 1], dt0s[j - 1]).gates, m, counter)
                ov = kernels.uniform_overlap(psi)
            cms[j] = psi[m]
            ovs[j] = ov
            calls[j] = counter.calls
        if engine == "gates":
            leak = float(np.vdot(amps[N:], amps[N:]).real)
            if leak > 1e-10:
                raise SubspaceViolationError(f"ancilla left |0> (weight {leak:.3e})")
        final = PureState.__new__(PureState)
        final.n_qubits = plan.n_qubits
        final.amplitudes = psi.copy()

    wall = time.perf_counter() - started
    succ = np.empty(R + 1)
    dist = np.empty(R + 1)
    ameas = np.empty(R + 1)
    for k in range(R + 1):
        succ[k], dist[k], ameas[k] = _metrics(cms[k], ovs[k], plan.N, grover)

    idx = np.arange(R + 1)
    times = np.array(plan.times())
    if plan.algorithm is Algorithm.ADIABATIC:
        svals = np.array([0.0] + [st.s for st in plan.steps])
    else:
        svals = np.full(R + 1, np.nan)
    apred = np.array([predicted_angle(plan, k) for k in range(R + 1)])
    if not record:
        keep = np.array([0, R]) if R > 0 else np.array([0])
        idx, times, svals, apred, ameas = idx[keep], times[keep], svals[keep], apred[keep], ameas[keep]
        cms, succ, dist, calls = cms[keep], succ[keep], dist[keep], calls[keep]
        ovs = ovs[keep]
    return RunReport(
        plan=plan,
        engine=engine,
        marked=oracle.marked,
        j=idx,
        t=times,
        s=svals,
        alpha_pred=apred,
        alpha_meas=ameas,
        overlap=cms,
        succ_prob=succ,
        dist=dist,
        oracle_calls=calls,
        final_state=final,
        wall_time=wall,
    )
