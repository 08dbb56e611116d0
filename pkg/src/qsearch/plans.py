"""Step plans for the three search algorithms.

Every algorithm is a sequence of steps ``exp(-i H0 dt0) exp(-i Hf dtf)``:

=========  ===================  ==========================  =============================
algorithm  steps R              dt0, dtf                    predicted angle after step j
=========  ===================  ==========================  =============================
grover     floor(pi/4 sqrt N)   pi, pi                      2j / sqrt N
analog     floor(sqrt N / eps)  eps pi/2, eps pi/2          (eps j / sqrt N) pi/2
adiabatic  floor(sqrt N/eps^3)  (1-s_j) dT, s_j dT          (eps^3 j / sqrt N) pi/2
=========  ===================  ==========================  =============================

For the adiabatic plan ``dT = T_ad / R`` (after flooring, so the plan ends at
exactly ``T_ad``) and ``s_j = s(j dT)`` is the right-endpoint value of the local
schedule, with ``s_R = 1``.

With an explicit step-count override the analog and adiabatic plans keep their
total time and use ``dT = T / R``; the predicted angle then falls back to the
constant-rate form ``(pi/2) t_j / T`` (``2j/sqrt N`` for Grover).
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from ._format import fmt
from .errors import InvalidInputError, InvalidParameterError
from .schedules import LocalAdiabaticSchedule


class Algorithm(str, enum.Enum):
    GROVER = "grover"
    ANALOG = "analog"
    ADIABATIC = "adiabatic"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown algorithm {value!r}; expected one of {[a.value for a in cls]}"
            ) from None


class Step(NamedTuple):
    s: float | None
    dt0: float
    dtf: float


def floor_count(x):
    """``floor(x)``, snapping values within 1e-9 (relative) of an integer.

    Plain flooring turns e.g. ``32 / 0.2**3 = 3999.9999999999995`` into 3999.
    """
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return int(math.floor(x))


def default_steps(algorithm, N, epsilon=None):
    algorithm = Algorithm.parse(algorithm)
    root = math.sqrt(N)
    if algorithm is Algorithm.GROVER:
        return floor_count(math.pi / 4.0 * root)
    if algorithm is Algorithm.ANALOG:
        return floor_count(root / epsilon)
    return floor_count(root / epsilon**3)


def analog_total_time(N):
    return math.pi / 2.0 * math.sqrt(N)


@dataclass(frozen=True)
class StepPlan:
    algorithm: Algorithm
    n_qubits: int
    epsilon: float | None
    steps: tuple
    overridden: bool = False

    @property
    def N(self):
        return float(1 << self.n_qubits)

    @property
    def R(self):
        return len(self.steps)

    def step_time(self, j):
        """Hamiltonian time represented by step ``j`` (1-based)."""
        st = self.steps[j - 1]
        if self.algorithm is Algorithm.ADIABATIC:
            return st.dt0 + st.dtf
        return st.dtf

    def times(self):
        """``t_0 = 0, t_1, ..., t_R``."""
        out = [0.0]
        if self.algorithm is Algorithm.ADIABATIC:
            dT = self.total_time / self.R
            out.extend(j * dT for j in range(1, self.R + 1))
            out[-1] = self.total_time
            return out
        for j in range(1, self.R + 1):
            out.append(j * self.step_time(j))
        return out

    @property
    def total_time(self):
        if self.algorithm is Algorithm.ADIABATIC:
            return LocalAdiabaticSchedule(self.N, self.epsilon).total_time
        return self.R * self.step_time(1)

    @property
    def schedule(self):
        if self.algorithm is not Algorithm.ADIABATIC:
            return None
        return LocalAdiabaticSchedule(self.N, self.epsilon)

    def oracle_calls_hamiltonian(self):
        return 2 * self.R

    def to_csv(self):
        lines = ["j,s,dt0,dtf"]
        for j, st in enumerate(self.steps, 1):
            lines.append(f"{j},{fmt(st.s)},{fmt(st.dt0)},{fmt(st.dtf)}")
        return "\n".join(lines) + "\n"


def build_plan(algorithm, n_qubits, epsilon=None, steps=None):
    algorithm = Algorithm.parse(algorithm)
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise InvalidInputError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    N = float(1 << n_qubits)
    if algorithm is Algorithm.GROVER:
        epsilon = None
    else:
        if epsilon is None:
            raise InvalidInputError(f"epsilon is required for the {algorithm.value} plan")
        epsilon = float(epsilon)
        if not 0.0 < epsilon < 1.0:
            raise InvalidInputError(f"epsilon must lie in (0, 1), got {epsilon}")

    overridden = steps is not None
    R = int(steps) if overridden else default_steps(algorithm, N, epsilon)
    if R < 1:
        raise InvalidParameterError(
            f"{algorithm.value} plan has R={R} steps for N={N:g}, epsilon={epsilon}"
        )

    if algorithm is Algorithm.GROVER:
        plan_steps = (Step(None, math.pi, math.pi),) * R
    elif algorithm is Algorithm.ANALOG:
        dt = analog_total_time(N) / R if overridden else epsilon * math.pi / 2.0
        plan_steps = (Step(None, dt, dt),) * R
    else:
        sched = LocalAdiabaticSchedule(N, epsilon)
        dT = sched.total_time / R
        levels = [sched.s_of_t(j * dT) for j in range(1, R)] + [1.0]
        plan_steps = tuple(Step(s, (1.0 - s) * dT, s * dT) for s in levels)
    return StepPlan(algorithm, n_qubits, epsilon, plan_steps, overridden)


def predicted_angle(plan, j):
    if not 0 <= j <= plan.R:
        raise InvalidInputError(f"j must lie in [0, {plan.R}], got {j}")
    root = math.sqrt(plan.N)
    eps = plan.epsilon
    if plan.algorithm is Algorithm.GROVER:
        return 2.0 * j / root
    if plan.overridden:
        if plan.algorithm is Algorithm.ANALOG:
            return j * plan.step_time(1) / root
        return math.pi / 2.0 * j / plan.R
    if plan.algorithm is Algorithm.ANALOG:
        return (eps * j / root) * (math.pi / 2.0)
    return (eps**3 * j / root) * (math.pi / 2.0)


def read_plan_csv(text):
    """Parse the ``j,s,dt0,dtf`` format back into a list of :class:`Step`."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or lines[0].strip() != "j,s,dt0,dtf":
        raise InvalidInputError("plan CSV must start with the header 'j,s,dt0,dtf'")
    out = []
    for expect, ln in enumerate(lines[1:], 1):
        j, s, dt0, dtf = ln.split(",")
        if int(j) != expect:
            raise InvalidInputError(f"plan rows out of order at j={j}")
        out.append(Step(float(s) if s else None, float(dt0), float(dtf)))
    return out
