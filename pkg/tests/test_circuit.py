import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from qsearch.circuit import (
    APHASE,
    GPHASE,
    HALL,
    ORACLE,
    ZPHASE,
    AncillaState,
    GateSequence,
    ancilla_phase,
    attach_ancilla,
    compile_marked_evolution,
    compile_mixing_evolution,
    compile_plan,
    compile_step,
    discard_ancilla,
    execute,
    make_gate,
    oracle_bitflip,
)
from qsearch.errors import InvalidInputError, SubspaceViolationError
from qsearch.plans import build_plan
from qsearch.statevector import (
    OracleCounter,
    OracleSpec,
    PureState,
    apply_diffusion,
    apply_oracle_phase,
    basis_state,
    evolve_marked_hamiltonian,
    evolve_mixing_hamiltonian,
    grover_iteration,
    phase_distance,
    uniform_state,
)


def _anc(n, x, y):
    amps = np.zeros(2 << n, dtype=complex)
    amps[(y << n) + x] = 1.0
    return AncillaState(n, amps)


def test_bitflip_examples():
    o = OracleSpec(3, 4)
    c = OracleCounter()
    assert np.array_equal(oracle_bitflip(_anc(3, 4, 0), o, c).amplitudes, _anc(3, 4, 1).amplitudes)
    assert np.array_equal(oracle_bitflip(_anc(3, 2, 0), o, c).amplitudes, _anc(3, 2, 0).amplitudes)
    sigma = attach_ancilla(PureState(3, random_state(np.random.default_rng(1), 3)))
    twice = oracle_bitflip(oracle_bitflip(sigma, o, c), o, c)
    assert np.array_equal(twice.amplitudes, sigma.amplitudes)
    assert c.calls == 4


def test_ancilla_phase_examples():
    rng = np.random.default_rng(2)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    sigma = AncillaState(3, v / np.linalg.norm(v))
    assert np.allclose(ancilla_phase(sigma, 0.0).amplitudes, sigma.amplitudes)
    out = ancilla_phase(sigma, math.pi)
    assert np.allclose(out.amplitudes[:8], -sigma.amplitudes[:8], atol=1e-15)
    assert np.array_equal(out.amplitudes[8:], sigma.amplitudes[8:])


def test_marked_evolution_on_basis_states():
    o = OracleSpec(3, 6)
    t = 0.913
    for x in range(8):
        out = execute(_anc(3, x, 0), compile_marked_evolution(t), o)
        expect = np.exp(-1j * (1 - o.f(x)) * t)
        assert out.amplitudes[x] == pytest.approx(expect, abs=1e-15)
        assert out.ancilla_one_weight() == 0.0


def test_marked_evolution_pi_and_zero(rng):
    o = OracleSpec(4, 11)
    psi = PureState(4, random_state(rng, 4))
    out = execute(psi, compile_marked_evolution(math.pi), o)
    assert np.allclose(out.amplitudes, -apply_oracle_phase(psi, o).amplitudes, atol=1e-12)
    c = OracleCounter()
    seq = compile_marked_evolution(0.0)
    assert seq.oracle_count() == 2
    assert np.allclose(execute(psi, seq, o, c).amplitudes, psi.amplitudes)
    assert c.calls == 2


def test_mixing_evolution_examples(rng):
    o = OracleSpec(4, 0)
    psi = PureState(4, random_state(rng, 4))
    out = execute(psi, compile_mixing_evolution(math.pi), o)
    assert np.allclose(out.amplitudes, -apply_diffusion(psi).amplitudes, atol=1e-12)
    s = execute(uniform_state(4), compile_mixing_evolution(1.234), o)
    assert np.allclose(s.amplitudes, uniform_state(4).amplitudes, atol=1e-14)
    assert compile_mixing_evolution(1.0).oracle_count() == 0


def test_equivalence_with_rank_one_engine(rng):
    n = 5
    for _ in range(100):
        o = OracleSpec(n, int(rng.integers(1 << n)))
        psi = PureState(n, random_state(rng, n))
        t = float(rng.uniform(-10, 10))
        gates = execute(psi, compile_mixing_evolution(t), o)
        assert np.max(np.abs(gates.amplitudes - evolve_mixing_hamiltonian(psi, t).amplitudes)) <= 1e-12
        sigma = execute(attach_ancilla(psi), compile_marked_evolution(t), o)
        assert sigma.ancilla_one_weight() == 0.0
        reg = discard_ancilla(sigma)
        assert phase_distance(reg, evolve_marked_hamiltonian(psi, o, t)) <= 1e-12
        assert np.max(np.abs(reg.amplitudes - evolve_marked_hamiltonian(psi, o, t).amplitudes)) <= 1e-12


def test_empty_sequence_is_identity(rng):
    psi = PureState(3, random_state(rng, 3))
    assert np.array_equal(execute(psi, GateSequence(), OracleSpec(3, 1)).amplitudes, psi.amplitudes)


def test_grover_step_matches_up_to_phase(rng):
    o = OracleSpec(6, 17)
    psi = PureState(6, random_state(rng, 6))
    # operator product [mixing(pi), marked(pi)]: the marked factor acts first
    out = execute(psi, compile_step(math.pi, math.pi), o)
    assert phase_distance(out, grover_iteration(psi, o)) <= 1e-7
    assert np.allclose(out.amplitudes, -grover_iteration(psi, o).amplitudes, atol=1e-12)


def test_discard_detects_leak():
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[4] = 1 / math.sqrt(2)
    with pytest.raises(SubspaceViolationError):
        discard_ancilla(AncillaState(2, amps))


def test_text_round_trip():
    seq = compile_step(0.1, 1 / 3) + compile_marked_evolution(-2.5)
    text = seq.to_text()
    assert text.splitlines()[:4] == ["ORACLE", "APHASE 0.10000000000000001", "ORACLE", "HALL"]
    back = GateSequence.from_text(text)
    assert back == seq
    assert back.oracle_budget == 4
    with pytest.raises(InvalidInputError):
        GateSequence.from_text("ORACLE\nSWAP\n")
    with pytest.raises(InvalidInputError):
        GateSequence.from_text("APHASE\n")
    with pytest.raises(InvalidInputError):
        GateSequence((make_gate(ORACLE),), 2)
    with pytest.raises(InvalidInputError):
        make_gate("CNOT")


def test_unknown_gate_rejected_at_execution():
    from qsearch.circuit import Gate

    with pytest.raises(InvalidInputError):
        execute(uniform_state(2), [Gate("SWAP")], OracleSpec(2, 0))


def test_plan_census():
    for alg, eps in (("analog", 0.3), ("adiabatic", 0.5)):
        plan = build_plan(alg, 4, eps)
        seq = compile_plan(plan)
        assert seq.oracle_count() == 2 * plan.R
        kinds = [g.kind for g in seq.gates[:8]]
        assert kinds == [ORACLE, APHASE, ORACLE, HALL, ZPHASE, GPHASE, HALL, ORACLE]


@given(
    st.lists(
        st.one_of(
            st.builds(lambda t: compile_marked_evolution(t), st.floats(-7, 7)),
            st.builds(lambda t: compile_mixing_evolution(t), st.floats(-7, 7)),
        ),
        max_size=8,
    ),
    st.integers(0, 2**32 - 1),
)
def test_compiled_sequences_are_unitary(parts, seed):
    n = 4
    seq = GateSequence()
    for p in parts:
        seq = seq + p
    psi = PureState(n, random_state(np.random.default_rng(seed), n))
    c = OracleCounter()
    out = execute(psi, seq, OracleSpec(n, seed % 16), c)
    assert abs(out.norm() - 1.0) <= 1e-10
    assert c.calls == seq.oracle_budget == 2 * sum(1 for p in parts if p.oracle_budget)


def test_basis_state_marked_evolution_phase():
    o = OracleSpec(2, 0)
    out = execute(basis_state(2, 0), compile_marked_evolution(0.5), o)
    assert out.amplitudes[0] == pytest.approx(1.0)
