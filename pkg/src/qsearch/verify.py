"""Self-check harness: each check reports ``PASS|FAIL <name> <measured> <bound>``.

``fast`` covers the invariants of every module in a few seconds; ``full`` adds
the dense staircase and splitting-error probes. ``tamper`` replaces one
tolerance by an impossible value so that exactly that check fails; it exists
to exercise the harness itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import analysis, circuit, kernels, statevector, twolevel
from .execution import execute_plan
from .linalg import unitary_distance
from .plans import Algorithm, build_plan
from .schedules import LocalAdiabaticSchedule
from .statevector import OracleSpec

LEVELS = ("fast", "full")


@dataclass(frozen=True)
class Check:
    name: str
    measure: object  # () -> float
    bound: float
    relation: str = "le"  # measured <= bound, or "ge": measured >= bound
    level: str = "fast"


@dataclass(frozen=True)
class Outcome:
    name: str
    measured: float
    bound: float
    relation: str
    passed: bool

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} {self.measured:.6g} {self.bound:.6g}"


# measurements -------------------------------------------------------------


def _grover_n2():
    o = OracleSpec(2, 3)
    psi = statevector.grover_iteration(statevector.uniform_state(2), o)
    return statevector.phase_distance(psi, statevector.basis_state(2, 3))


def _grover_worst_margin():
    # largest dist * sqrt(N) / 2 over n = 6..14; below 1 means every run is within bound
    worst = 0.0
    for n in range(6, 15):
        plan = build_plan(Algorithm.GROVER, n)
        rep = execute_plan(plan, "twolevel", OracleSpec(n, 0), record=False)
        worst = max(worst, rep.final_distance * math.sqrt(plan.N) / 2.0)
    return worst


def _analog_closed_form():
    N = 1024.0
    tl = twolevel.analog_exact_state(math.pi / 2.0 * math.sqrt(N), N)
    return abs(1.0 - twolevel.success_probability(tl))


def _schedule_round_trip():
    sched = LocalAdiabaticSchedule(1024.0, 0.2)
    worst = 0.0
    for s in np.linspace(0.0, 1.0, 1001):
        worst = max(worst, abs(sched.s_of_t(sched.t_of_s(float(s))) - s))
    return worst


def _midpoint_angle():
    return max(abs(twolevel.ground_state_angle(0.5, N) - math.pi / 4.0) for N in (4.0, 32.0, 2.0**20))


def _min_gap():
    return max(abs(twolevel.gap(0.5, N) - 1.0 / math.sqrt(N)) for N in (4.0, 32.0, 2.0**20))


def _circuit_equivalence():
    rng = np.random.default_rng(7)
    n = 5
    worst = 0.0
    for _ in range(20):
        o = OracleSpec(n, int(rng.integers(1 << n)))
        v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi = statevector.PureState(n, v / np.linalg.norm(v))
        t = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        via_gates = circuit.execute(psi, circuit.compile_marked_evolution(t), o)
        direct = statevector.evolve_marked_hamiltonian(psi, o, t)
        worst = max(worst, float(np.max(np.abs(via_gates.amplitudes - direct.amplitudes))))
        via_gates = circuit.execute(psi, circuit.compile_mixing_evolution(t), o)
        direct = statevector.evolve_mixing_hamiltonian(psi, t)
        worst = max(worst, float(np.max(np.abs(via_gates.amplitudes - direct.amplitudes))))
    return worst


def _query_census():
    # |calls - 2R| summed over Hamiltonian plans on every engine
    miss = 0
    for alg, eps in ((Algorithm.ANALOG, 0.3), (Algorithm.ADIABATIC, 0.5)):
        plan = build_plan(alg, 6, eps)
        for engine in ("statevector", "gates", "twolevel"):
            rep = execute_plan(plan, engine, OracleSpec(6, 5), record=False)
            miss += abs(rep.total_calls - 2 * plan.R)
    return float(miss)


def _engine_agreement():
    plan = build_plan(Algorithm.ADIABATIC, 8, 0.4)
    o = OracleSpec(8, 77)
    full = execute_plan(plan, "statevector", o, record=False).final_state
    tl = execute_plan(plan, "twolevel", o, record=False).final_state
    return statevector.phase_distance(full, twolevel.embed(tl, o))


def _kernel_agreement():
    rng = np.random.default_rng(3)
    v = rng.normal(size=256) + 1j * rng.normal(size=256)
    v /= np.linalg.norm(v)
    a, b = v.copy(), v.copy()
    kernels.hamiltonian_step(a, 9, 0.3, 0.7)
    kernels.hamiltonian_step_np(b, 9, 0.3, 0.7)
    c, d = v.copy(), v.copy()
    kernels.fwht(c)
    kernels.fwht_np(d)
    return float(max(np.max(np.abs(a - b)), np.max(np.abs(c - d))))


def _adiabatic_final():
    plan = build_plan(Algorithm.ADIABATIC, 10, 0.2)
    return execute_plan(plan, "twolevel", OracleSpec(10, 0), record=False).final_distance


def _adiabatic_reference():
    N = 1024.0
    sched = LocalAdiabaticSchedule(N, 0.2)
    final = twolevel.ode_propagate(twolevel.uniform(N), sched, sched.total_time)
    return twolevel.phase_distance(final, twolevel.marked(N))


def _rate_constancy():
    times, angles = analysis.adiabatic_angle_profile(2.0**20, 0.1, samples=161)
    return analysis.rate_constancy(times, angles)[1]


def _rate_value():
    N, eps = 2.0**20, 0.1
    times, angles = analysis.adiabatic_angle_profile(N, eps, samples=161)
    slope, _ = analysis.rate_constancy(times, angles)
    return abs(slope / (eps / math.sqrt(N)) - 1.0)


def _commutator():
    worst = 0.0
    for n in (2, 4, 6):
        N = float(1 << n)
        worst = max(worst, abs(analysis.commutator_norm(n) - math.sqrt(1.0 / N) * math.sqrt(1.0 - 1.0 / N)))
    return worst


def _staircase(R):
    def measure():
        return analysis.staircase_distance(3, 0.5, R)

    return measure


def _staircase_bound(R):
    return analysis.staircase_bound(LocalAdiabaticSchedule(8.0, 0.5), R)


def _trotter_slope(n):
    def measure():
        rs = [40, 80, 160, 320]
        errs = [e for _, e in analysis.trotter_error_probe(n, rs)]
        return abs(analysis.loglog_slope(rs, errs) + 1.0)

    return measure


def _single_step_slope():
    dts = [0.08, 0.04, 0.02, 0.01]
    errs = [e for _, e in analysis.single_step_errors(6, dts)]
    return abs(analysis.loglog_slope(dts, errs) - 2.0)


def _adiabatic_trotter_slope():
    rs = [100, 200, 400]
    errs = [e for _, e in analysis.trotter_error_probe(4, rs, Algorithm.ADIABATIC, 0.3)]
    return abs(analysis.loglog_slope(rs, errs) + 1.0)


def _ode_unitarity():
    exact, stair = analysis.staircase_unitaries(3, 0.5, 8)
    return unitary_distance(exact @ exact.conj().T, np.eye(8))


# registry -----------------------------------------------------------------

TOLERANCES = {
    "grover n=2 exact": 1e-12,
    "grover rounding n=6..14": 1.0,
    "analog closed form": 1e-12,
    "schedule round trip": 1e-10,
    "alpha midpoint": 1e-12,
    "min gap": 1e-12,
    "circuit equivalence n=5": 1e-12,
    "query census": 0.0,
    "engine agreement n=8": 1e-9,
    "kernel agreement": 1e-12,
    "adiabatic final N=1024": 0.4,
    "adiabatic reference N=1024": 0.2,
    "rate constancy": 0.1,
    "rate value": 0.1,
    "commutator norm": 1e-10,
    "ode unitarity": 1e-8,
    "trotter slope n=4": 0.25,
    "trotter slope n=6": 0.25,
    "trotter slope n=8": 0.25,
    "single step slope": 0.2,
    "adiabatic trotter slope": 0.25,
}
for _R in (4, 8, 16, 32):
    TOLERANCES[f"staircase n=3 R={_R}"] = _staircase_bound(_R)


def checks():
    out = [
        Check("grover n=2 exact", _grover_n2, TOLERANCES["grover n=2 exact"]),
        Check("grover rounding n=6..14", _grover_worst_margin, TOLERANCES["grover rounding n=6..14"]),
        Check("analog closed form", _analog_closed_form, TOLERANCES["analog closed form"]),
        Check("schedule round trip", _schedule_round_trip, TOLERANCES["schedule round trip"]),
        Check("alpha midpoint", _midpoint_angle, TOLERANCES["alpha midpoint"]),
        Check("min gap", _min_gap, TOLERANCES["min gap"]),
        Check("circuit equivalence n=5", _circuit_equivalence, TOLERANCES["circuit equivalence n=5"]),
        Check("query census", _query_census, TOLERANCES["query census"]),
        Check("engine agreement n=8", _engine_agreement, TOLERANCES["engine agreement n=8"]),
        Check("kernel agreement", _kernel_agreement, TOLERANCES["kernel agreement"]),
        Check("adiabatic final N=1024", _adiabatic_final, TOLERANCES["adiabatic final N=1024"]),
        Check("adiabatic reference N=1024", _adiabatic_reference, TOLERANCES["adiabatic reference N=1024"]),
        Check("rate constancy", _rate_constancy, TOLERANCES["rate constancy"]),
        Check("rate value", _rate_value, TOLERANCES["rate value"]),
        Check("commutator norm", _commutator, TOLERANCES["commutator norm"]),
        Check("ode unitarity", _ode_unitarity, TOLERANCES["ode unitarity"], level="full"),
    ]
    for R in (4, 8, 16, 32):
        name = f"staircase n=3 R={R}"
        out.append(Check(name, _staircase(R), TOLERANCES[name], level="full"))
    for n in (4, 6, 8):
        name = f"trotter slope n={n}"
        out.append(Check(name, _trotter_slope(n), TOLERANCES[name], level="full"))
    out.append(Check("single step slope", _single_step_slope, TOLERANCES["single step slope"], level="full"))
    out.append(
        Check("adiabatic trotter slope", _adiabatic_trotter_slope, TOLERANCES["adiabatic trotter slope"], level="full")
    )
    return out


def _passes(measured, bound, relation):
    if not math.isfinite(measured):
        return False
    return measured <= bound if relation == "le" else measured >= bound


def run_checks(level="fast", tamper=None, emit=None):
    """Run the checks for ``level``; returns a list of :class:`Outcome`.

    ``emit`` (e.g. ``print``) receives each report line as soon as it is ready.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    selected = [c for c in checks() if level == "full" or c.level == "fast"]
    names = {c.name for c in selected}
    if tamper is not None and tamper not in names:
        raise KeyError(f"no check named {tamper!r} at level {level}")
    results = []
    for c in selected:
        bound = c.bound
        if c.name == tamper:
            bound = -math.inf if c.relation == "le" else math.inf
        try:
            measured = float(c.measure())
        except Exception:  # a crashing check is a failing check
            measured = math.nan
        res = Outcome(c.name, measured, bound, c.relation, _passes(measured, bound, c.relation))
        results.append(res)
        if emit is not None:
            emit(res.line())
    return results


def check_names(level="full"):
    return [c.name for c in checks() if level == "full" or c.level == "fast"]
