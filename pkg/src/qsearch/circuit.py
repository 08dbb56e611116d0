"""Gate-level realization of the Hamiltonian evolutions.

``exp(-i H_f t)`` is realized with a one-qubit ancilla in ``|0>``, two calls
to the bit-flip oracle ``O_f`` and a phase gate on the ancilla.
``exp(-i H_0 t)`` is realized by conjugating ``exp(-i (I - |0><0|) t)`` with
Hadamards on every register qubit; the projector part is split into a phase
on ``|0...0>`` and an explicit global phase, and never touches the oracle.

The register-plus-ancilla state is stored with the ancilla as the most
significant bit: index ``y * N + x``.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import CapacityError, InvalidInputError, SubspaceViolationError
from .statevector import PureState, _check_dims, check_qubits

ORACLE = "ORACLE"
APHASE = "APHASE"
HALL = "HALL"
ZPHASE = "ZPHASE"
GPHASE = "GPHASE"

GATE_KINDS = (ORACLE, APHASE, HALL, ZPHASE, GPHASE)
_TIMED = {APHASE, ZPHASE, GPHASE}

MAX_REGISTER_QUBITS = 23
ANCILLA_TOL = 1e-10


class Gate(NamedTuple):
    kind: str
    t: float | None = None

    def to_line(self):
        if self.kind in _TIMED:
            return f"{self.kind} {self.t:.17g}"
        return self.kind


def make_gate(kind, t=None):
    if kind not in GATE_KINDS:
        raise InvalidInputError(f"unknown gate tag {kind!r}")
    if kind in _TIMED:
        if t is None or not math.isfinite(t):
            raise InvalidInputError(f"{kind} needs a finite time argument")
        return Gate(kind, float(t))
    if t is not None:
        raise InvalidInputError(f"{kind} takes no argument")
    return Gate(kind)


@dataclass(frozen=True)
class GateSequence:
    gates: tuple = ()
    oracle_budget: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.oracle_count() != self.oracle_budget:
            raise InvalidInputError(
                f"sequence has {self.oracle_count()} oracle gates but declares "
                f"a budget of {self.oracle_budget}"
            )

    def oracle_count(self):
        return sum(1 for g in self.gates if g.kind == ORACLE)

    def __add__(self, other):
        return GateSequence(self.gates + other.gates, self.oracle_budget + other.oracle_budget)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def to_text(self):
        return "".join(g.to_line() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, text):
        gates = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            kind = parts[0]
            if kind not in GATE_KINDS:
                raise InvalidInputError(f"line {lineno}: unknown gate tag {kind!r}")
            if kind in _TIMED:
                if len(parts) != 2:
                    raise InvalidInputError(f"line {lineno}: {kind} expects one time argument")
                try:
                    gates.append(make_gate(kind, float(parts[1])))
                except ValueError as exc:
                    raise InvalidInputError(f"line {lineno}: {exc}") from None
            else:
                if len(parts) != 1:
                    raise InvalidInputError(f"line {lineno}: {kind} takes no argument")
                gates.append(make_gate(kind))
        budget = sum(1 for g in gates if g.kind == ORACLE)
        return cls(tuple(gates), budget)


@dataclass(eq=False)
class AncillaState:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_register(self.n_qubits)
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 << self.n_qubits,):
            raise InvalidInputError(
                f"expected {2 << self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        self.amplitudes = amps

    @property
    def register_dim(self):
        return 1 << self.n_qubits

    def ancilla_one_weight(self):
        tail = self.amplitudes[self.register_dim:]
        return float(np.vdot(tail, tail).real)


def check_register(n):
    check_qubits(n)
    if n > MAX_REGISTER_QUBITS:
        raise CapacityError(
            f"gate engine is limited to {MAX_REGISTER_QUBITS} register qubits "
            f"(plus the ancilla), got {n}; use the two-level engine for larger N"
        )


def attach_ancilla(psi):
    """``psi ⊗ |0>``."""
    check_register(psi.n_qubits)
    amps = np.zeros(2 << psi.n_qubits, dtype=np.complex128)
    amps[: psi.dim] = psi.amplitudes
    return AncillaState(psi.n_qubits, amps)


def discard_ancilla(sigma, tol=ANCILLA_TOL):
    """Return the register state, requiring the ancilla to be back in ``|0>``."""
    leak = sigma.ancilla_one_weight()
    if leak > tol:
        raise SubspaceViolationError(f"ancilla is entangled with the register (weight {leak:.3e} on |1>)")
    return PureState(sigma.n_qubits, sigma.amplitudes[: sigma.register_dim].copy())


def oracle_bitflip(sigma, o, counter=None):
    """``O_f |x>|y> = |x>|y XOR f(x)>``; one oracle query."""
    _check_dims(sigma, o)
    amps = sigma.amplitudes.copy()
    _bitflip_inplace(amps, sigma.register_dim, o.marked)
    if counter is not None:
        counter.charge(1)
    return AncillaState(sigma.n_qubits, amps)


def ancilla_phase(sigma, t):
    """``U_t = exp(-i t)|0><0| + |1><1|`` on the ancilla."""
    amps = sigma.amplitudes.copy()
    amps[: sigma.register_dim] *= complex(math.cos(t), -math.sin(t))
    return AncillaState(sigma.n_qubits, amps)


def _bitflip_inplace(amps, dim, m):
    amps[m], amps[dim + m] = amps[dim + m], amps[m]


def compile_marked_evolution(t):
    """Gate sequence for ``exp(-i H_f t)``: oracle, ancilla phase, oracle."""
    return GateSequence((make_gate(ORACLE), make_gate(APHASE, t), make_gate(ORACLE)), 2)


def compile_mixing_evolution(t):
    """Gate sequence for ``exp(-i H_0 t)``; oracle-free."""
    return GateSequence(
        (make_gate(HALL), make_gate(ZPHASE, t), make_gate(GPHASE, t), make_gate(HALL)), 0
    )


def compile_step(dtf, dt0):
    """One algorithm step: the ``H_f`` factor first, then the ``H_0`` factor."""
    return compile_marked_evolution(dtf) + compile_mixing_evolution(dt0)


def compile_plan(plan):
    """Concatenate the compiled steps of a :class:`~qsearch.plans.StepPlan`."""
    gates = []
    for step in plan.steps:
        gates.extend(compile_step(step.dtf, step.dt0).gates)
    return GateSequence(tuple(gates), 2 * len(plan.steps))


def apply_gates_inplace(amps, register_dim, gates, marked, counter=None):
    """Apply ``gates`` to a ``2 * register_dim`` ancilla-register array in place."""
    lo = amps[:register_dim]
    hi = amps[register_dim:]
    for g in gates:
        kind = g.kind
        if kind == ORACLE:
            _bitflip_inplace(amps, register_dim, marked)
            if counter is not None:
                counter.charge(1)
        elif kind == APHASE:
            lo *= complex(math.cos(g.t), -math.sin(g.t))
        elif kind == HALL:
            kernels.fwht(lo)
            kernels.fwht(hi)
        elif kind == ZPHASE:
            ph = complex(math.cos(g.t), math.sin(g.t))
            amps[0] *= ph
            amps[register_dim] *= ph
        elif kind == GPHASE:
            amps *= complex(math.cos(g.t), -math.sin(g.t))
        else:
            raise InvalidInputError(f"unknown gate tag {kind!r}")


def execute(state, seq, o, counter=None):
    """Run ``seq`` in order on ``state``.

    An :class:`AncillaState` is returned as such. A :class:`PureState` is
    extended with an ancilla in ``|0>`` and the ancilla is discarded at the
    end; :class:`SubspaceViolationError` is raised if it did not return to
    ``|0>``.
    """
    _check_dims(state, o)
    gates = seq.gates if isinstance(seq, GateSequence) else tuple(seq)
    if isinstance(state, AncillaState):
        sigma = AncillaState(state.n_qubits, state.amplitudes.copy())
        apply_gates_inplace(sigma.amplitudes, sigma.register_dim, gates, o.marked, counter)
        return sigma
    if isinstance(state, PureState):
        sigma = attach_ancilla(state)
        apply_gates_inplace(sigma.amplitudes, sigma.register_dim, gates, o.marked, counter)
        return discard_ancilla(sigma)
    raise InvalidInputError(f"cannot execute gates on {type(state).__name__}")
