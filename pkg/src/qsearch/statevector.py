"""Exact 2**n-amplitude simulation of the search operators.

Both Hamiltonians are identity minus a rank-one projector, so every evolution
is a phase plus a rank-one correction and costs O(N) per application. All
public operations return a fresh :class:`PureState`; the input is never
modified.

Oracle pricing: a phase flip ``U_f`` costs one query (ancilla prepared in
``|->``), an evolution under ``H_f`` costs two (the ancilla circuit in
:mod:`qsearch.circuit`).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, InvalidInputError

MAX_QUBITS = 24
NORM_TOL = 1e-10


@dataclass(frozen=True)
class OracleSpec:
    n_qubits: int
    marked: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= 62:
            raise InvalidInputError(f"n_qubits must be in [1, 62], got {self.n_qubits}")
        if not 0 <= self.marked < (1 << self.n_qubits):
            raise InvalidInputError(
                f"marked index {self.marked} out of range for {self.n_qubits} qubits"
            )

    @property
    def dim(self):
        return 1 << self.n_qubits

    def f(self, x):
        return 1 if x == self.marked else 0


@dataclass
class OracleCounter:
    """Query counter owned by a single run."""

    calls: int = 0

    def charge(self, k=1):
        self.calls += k


@dataclass(eq=False)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_qubits(self.n_qubits)
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise InvalidInputError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidInputError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidInputError(f"state is not normalized (norm^2 = {norm!r})")
        self.amplitudes = amps

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    def copy(self):
        return PureState(self.n_qubits, self.amplitudes.copy())

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


def check_qubits(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"n_qubits must be a positive integer, got {n!r}")
    if n > MAX_QUBITS:
        raise CapacityError(
            f"statevector engine is limited to {MAX_QUBITS} qubits, got {n}; "
            "use the two-level engine for larger N"
        )


def _check_dims(psi, o):
    if psi.n_qubits != o.n_qubits:
        raise InvalidInputError(
            f"state has {psi.n_qubits} qubits but oracle expects {o.n_qubits}"
        )


def _fresh(psi, amps):
    # bypass re-validation: kernels preserve the norm to rounding
    out = PureState.__new__(PureState)
    out.n_qubits = psi.n_qubits
    out.amplitudes = amps
    return out


def uniform_state(n_qubits):
    check_qubits(n_qubits)
    dim = 1 << n_qubits
    return PureState(n_qubits, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def basis_state(n_qubits, x):
    check_qubits(n_qubits)
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[x] = 1.0
    return PureState(n_qubits, amps)


def apply_oracle_phase(psi, o, counter=None):
    """``U_f = I - 2|m><m|``; one oracle query."""
    _check_dims(psi, o)
    amps = psi.amplitudes.copy()
    amps[o.marked] = -amps[o.marked]
    if counter is not None:
        counter.charge(1)
    return _fresh(psi, amps)


def apply_diffusion(psi):
    """``U_0 = I - 2|s><s|`` via one inner product."""
    amps = psi.amplitudes.copy()
    kernels.reflect_uniform(amps)
    return _fresh(psi, amps)


def grover_iteration(psi, o, counter=None):
    """``G = -U_0 U_f``; one oracle query."""
    _check_dims(psi, o)
    amps = psi.amplitudes.copy()
    kernels.grover_step(amps, o.marked)
    if counter is not None:
        counter.charge(1)
    return _fresh(psi, amps)


def evolve_marked_hamiltonian(psi, o, t, counter=None):
    """``exp(-i H_f t)`` with ``H_f = I - |m><m|``; priced at two oracle queries."""
    _check_dims(psi, o)
    if not math.isfinite(t):
        raise InvalidInputError(f"time must be finite, got {t}")
    amps = psi.amplitudes.copy()
    kernels.marked_evolve(amps, o.marked, float(t))
    if counter is not None:
        counter.charge(2)
    return _fresh(psi, amps)


def evolve_mixing_hamiltonian(psi, t):
    """``exp(-i H_0 t)`` with ``H_0 = I - |s><s|``; no oracle cost."""
    if not math.isfinite(t):
        raise InvalidInputError(f"time must be finite, got {t}")
    amps = psi.amplitudes.copy()
    kernels.mixing_evolve(amps, float(t))
    return _fresh(psi, amps)


def overlap_uniform(psi):
    return complex(kernels.uniform_overlap(psi.amplitudes))


def success_probability(psi, o):
    _check_dims(psi, o)
    a = psi.amplitudes[o.marked]
    return min(1.0, float(a.real * a.real + a.imag * a.imag))


def phase_distance(psi, phi):
    """Distance minimized over a global phase: ``sqrt(2 - 2|<phi|psi>|)``."""
    a = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=np.complex128)
    b = phi.amplitudes if isinstance(phi, PureState) else np.asarray(phi, dtype=np.complex128)
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    for name, v in (("psi", a), ("phi", b)):
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-8:
            raise InvalidInputError(f"{name} is not normalized")
    return aligned_distance(a, b)


def aligned_distance(a, b):
    """``min_phi ||a - e^{i phi} b||`` for normalized vectors.

    Equal to ``sqrt(2 - 2|<b|a>|)`` but evaluated directly, which keeps full
    relative accuracy for nearly parallel vectors.
    """
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if ov != 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def fidelity_distance(overlap_abs):
    """``sqrt(2 - 2|<phi|psi>|)`` from the overlap magnitude, clamped at 0."""
    return math.sqrt(max(0.0, 2.0 - 2.0 * min(1.0, overlap_abs)))


def measure_counts(psi, shots, seed):
    """Sample ``shots`` computational-basis outcomes; returns ``{index: count}``."""
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise InvalidInputError(f"shots must be a positive integer, got {shots!r}")
    p = np.abs(psi.amplitudes) ** 2
    p /= p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    nz = np.flatnonzero(counts)
    return {int(x): int(counts[x]) for x in nz}


def dense_marked_hamiltonian(o):
    """Explicit ``H_f`` matrix (verification only)."""
    h = np.eye(o.dim, dtype=np.complex128)
    h[o.marked, o.marked] = 0.0
    return h


def dense_mixing_hamiltonian(n_qubits):
    """Explicit ``H_0`` matrix (verification only)."""
    dim = 1 << n_qubits
    return np.eye(dim, dtype=np.complex128) - np.full((dim, dim), 1.0 / dim, dtype=np.complex128)
