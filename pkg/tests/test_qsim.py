"""Statevector simulator, noise trajectories and basis transpiler."""

from __future__ import annotations

import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catqae.qsim import (
    Circuit,
    Gate,
    InvalidGateError,
    NoisePreset,
    Statevector,
    cry,
    cx,
    frequency_of,
    gate_unitary,
    get_preset,
    h,
    mcry,
    mcx,
    noisy_execute,
    ry,
    rz,
    sample_shots,
    simulate,
    sx,
    transpile_to_basis,
    unitary_equivalence_error,
    x,
    z,
)
from catqae.qsim.transpile import BASIS, TranspileError, circuit_depth

I2 = np.eye(2)
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])
X = np.array([[0, 1], [1, 0]], dtype=complex)


def kron_op(ops_by_qubit: dict, n: int) -> np.ndarray:
    """Tensor product with qubit n-1 leftmost (little-endian index order)."""
    return reduce(np.kron, [ops_by_qubit.get(q, I2) for q in reversed(range(n))])


def controlled_oracle(u: np.ndarray, controls, target, n) -> np.ndarray:
    """Independent dense construction of a multi-controlled 2x2 unitary."""
    all_on = kron_op({**{c: P1 for c in controls}, target: u}, n)
    proj_on = kron_op({c: P1 for c in controls}, n)
    return all_on + (np.eye(2**n) - proj_on)


@st.composite
def random_circuits(draw, max_qubits=4, max_gates=25):
    n = draw(st.integers(2, max_qubits))
    gates = []
    for _ in range(draw(st.integers(1, max_gates))):
        kind = draw(st.sampled_from(["RY", "RZ", "X", "H", "Z", "SX", "CX", "CRY", "MCX", "MCRY"]))
        qubits = draw(st.permutations(range(n)))
        angle = draw(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False))
        target = qubits[0]
        if kind in ("CX", "CRY"):
            gates.append(Gate(kind, target, (qubits[1],), angle if kind == "CRY" else 0.0))
        elif kind in ("MCX", "MCRY"):
            if n < 3:
                continue
            k = draw(st.integers(2, n - 1))
            gates.append(Gate(kind, target, tuple(qubits[1:1 + k]),
                              angle if kind == "MCRY" else 0.0))
        else:
            gates.append(Gate(kind, target, (), angle if kind in ("RY", "RZ") else 0.0))
    return Circuit(n, gates)


class TestGateConventions:
    """Gate matrices and qubit ordering."""

    def test_ry_matrix_sign(self):
        u = gate_unitary(ry(0, 0.7), 1)
        c, s = math.cos(0.35), math.sin(0.35)
        assert np.allclose(u, [[c, -s], [s, c]])

    def test_rz_matrix(self):
        u = gate_unitary(rz(0, 0.4), 1)
        assert np.allclose(u, np.diag([np.exp(-0.2j), np.exp(0.2j)]))

    def test_sx_squares_to_x(self):
        u = gate_unitary(sx(0), 1)
        assert np.allclose(u @ u, X)

    def test_qubit_zero_is_low_bit(self):
        state = simulate(Circuit(3, [x(0)]))
        assert np.isclose(abs(state.amplitudes[1]), 1.0)

    def test_cx_control_and_target(self):
        state = simulate(Circuit(2, [x(1), cx(1, 0)]))
        assert np.isclose(abs(state.amplitudes[3]), 1.0)
        state = simulate(Circuit(2, [x(0), cx(1, 0)]))
        assert np.isclose(abs(state.amplitudes[1]), 1.0)

    @pytest.mark.parametrize("gate,n", [
        (cry(2, 0, 1.1), 3),
        (mcry((0, 3), 1, -0.8), 4),
        (mcx((0, 1, 2), 3), 4),
        (cx(0, 2), 3),
        (h(1), 3),
        (z(2), 3),
    ])
    def test_dense_matrix_matches_kron_oracle(self, gate, n):
        c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        base = {
            "CRY": np.array([[c, -s], [s, c]]),
            "MCRY": np.array([[c, -s], [s, c]]),
            "CX": X,
            "MCX": X,
            "H": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
            "Z": np.diag([1, -1]),
        }[gate.kind]
        want = controlled_oracle(base, gate.controls, gate.target, n)
        assert np.allclose(gate_unitary(gate, n), want, atol=1e-12)

    def test_invalid_gates_rejected(self):
        with pytest.raises(InvalidGateError):
            Gate("FOO", 0)
        with pytest.raises(InvalidGateError):
            Gate("CX", 0, (0,))
        with pytest.raises(InvalidGateError):
            Gate("RY", 0, (), float("nan"))
        with pytest.raises(InvalidGateError):
            Circuit(2, [x(2)])

    def test_constructors_collapse_control_counts(self):
        assert mcx((), 1).kind == "X"
        assert mcx((0,), 1).kind == "CX"
        assert mcry((0,), 1, 0.3).kind == "CRY"


class TestSimulation:
    """Exact evolution and Born-rule sampling."""

    @settings(max_examples=60, deadline=None)
    @given(random_circuits())
    def test_norm_preserved(self, circ):
        assert abs(simulate(circ).norm - 1.0) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(random_circuits(max_gates=12))
    def test_inverse_returns_to_zero(self, circ):
        if any(g.kind == "SX" for g in circ.gates):
            return
        out = simulate(circ.compose(circ.inverse()))
        assert abs(abs(out.amplitudes[0]) - 1.0) < 1e-10

    def test_bell_state(self):
        state = simulate(Circuit(2, [h(0), cx(0, 1)]))
        assert np.allclose(state.probabilities(), [0.5, 0, 0, 0.5])

    def test_marginal_bit_order(self):
        state = simulate(Circuit(3, [x(2)]))
        assert np.allclose(state.marginal([2, 0]), [0, 1, 0, 0])

    def test_sampling_deterministic_under_seed(self):
        state = simulate(Circuit(2, [ry(0, 1.0), h(1)]))
        a = sample_shots(state, [0, 1], 500, 123)
        b = sample_shots(state, [0, 1], 500, 123)
        assert a == b
        assert sum(a.values()) == 500

    def test_sampling_matches_probability(self):
        state = simulate(Circuit(1, [ry(0, 2 * math.asin(math.sqrt(0.3)))]))
        freq = frequency_of(sample_shots(state, [0], 200_000, 7), "1")
        assert abs(freq - 0.3) < 4 * math.sqrt(0.3 * 0.7 / 200_000)

    def test_sampling_rejects_zero_shots(self):
        with pytest.raises(ValueError):
            sample_shots(Statevector.zero(1), [0], 0, 0)

    def test_invalid_statevector_length(self):
        with pytest.raises(ValueError):
            Statevector(np.ones(3))


class TestNoise:
    """Pauli-trajectory noise and readout flips."""

    def test_presets(self):
        assert get_preset("noiseless").is_noiseless
        assert get_preset("high").p_2q == 0.10
        with pytest.raises(ValueError):
            get_preset("extreme")
        with pytest.raises(ValueError):
            NoisePreset("bad", p_1q=1.5)

    def test_noiseless_matches_exact_sampling(self):
        circ = Circuit(2, [ry(0, 0.9), cx(0, 1)])
        a = noisy_execute(circ, get_preset("noiseless"), [1], 1000, 5)
        b = sample_shots(simulate(circ), [1], 1000, 5)
        assert a == b

    def test_deterministic_under_seed(self):
        circ = Circuit(3, [h(0), cx(0, 1), cry(1, 2, 0.4)])
        preset = get_preset("medium")
        assert noisy_execute(circ, preset, [2], 2000, 11) == noisy_execute(circ, preset, [2], 2000, 11)

    def test_full_depolarizing_limit(self):
        circ = Circuit(2, [cx(0, 1)])
        hist = noisy_execute(circ, NoisePreset("dep", p_2q=1.0), [1], 40_000, 3)
        assert abs(frequency_of(hist, "1") - 0.5) < 0.02

    def test_readout_flip_rate(self):
        circ = Circuit(1, [x(0)])
        hist = noisy_execute(circ, NoisePreset("ro", p_readout=0.1), [0], 50_000, 9)
        assert abs(frequency_of(hist, "0") - 0.1) < 0.01

    def test_noise_biases_small_probability_upward(self):
        circ = Circuit(2, [ry(0, 0.2), cx(0, 1)])
        exact = simulate(circ).probability_of_one(1)
        hist = noisy_execute(circ, get_preset("high"), [1], 40_000, 1)
        assert frequency_of(hist, "1") > exact


class TestTranspiler:
    """Lowering to {CX, RZ, SX, X}."""

    @settings(max_examples=25, deadline=None)
    @given(random_circuits(max_qubits=4, max_gates=10))
    def test_equivalence_random(self, circ):
        out = transpile_to_basis(circ)
        assert {g.kind for g in out.gates} <= BASIS
        assert unitary_equivalence_error(circ, out.circuit) < 1e-9

    def test_metrics(self):
        circ = Circuit(2, [h(0), cx(0, 1)])
        out = transpile_to_basis(circ)
        assert out.two_qubit_count == 1
        assert out.total_gates == len(out.gates)
        assert out.depth == circuit_depth(out.circuit)

    def test_depth_of_parallel_layer(self):
        assert circuit_depth(Circuit(3, [x(0), x(1), x(2)])) == 1
        assert circuit_depth(Circuit(2, [x(0), cx(0, 1), x(1)])) == 3

    def test_equivalence_detects_difference(self):
        a = Circuit(2, [ry(0, 0.3)])
        b = Circuit(2, [ry(0, 0.31)])
        assert unitary_equivalence_error(a, b) > 1e-4

    def test_global_phase_ignored(self):
        a = Circuit(1, [rz(0, 0.5)])
        b = Circuit(1, [rz(0, 0.5 + 4 * math.pi)])
        assert unitary_equivalence_error(a, b) < 1e-12

    def test_deterministic_counts(self):
        circ = Circuit(4, [mcry((0, 1, 2), 3, 0.7), mcx((0, 1), 2)])
        a, b = transpile_to_basis(circ), transpile_to_basis(circ)
        assert a.metrics == b.metrics
        assert a.gates == b.gates


class TestWorkedExamples:
    """Small hand-checked cases."""

    def test_empty_circuit_is_all_zero(self):
        amps = simulate(Circuit(3, [])).amplitudes
        assert amps[0] == 1.0 and np.count_nonzero(amps) == 1

    def test_hadamard_superposition(self):
        amps = simulate(Circuit(1, [h(0)])).amplitudes
        assert np.allclose(amps, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)

    def test_ry_pi_flips(self):
        amps = simulate(Circuit(1, [ry(0, math.pi)])).amplitudes
        assert np.allclose(amps, [0.0, 1.0], atol=1e-15)

    def test_cx_with_control_off_is_identity(self):
        assert np.allclose(simulate(Circuit(2, [cx(0, 1)])).amplitudes, [1, 0, 0, 0])

    def test_mcry_on_both_controls_set(self):
        theta = 0.9
        amps = simulate(Circuit(3, [x(0), x(1), mcry((0, 1), 2, theta)])).amplitudes
        want = np.zeros(8)
        want[0b011], want[0b111] = math.cos(theta / 2), math.sin(theta / 2)
        assert np.allclose(amps, want, atol=1e-15)

    def test_sampling_basis_state(self):
        state = simulate(Circuit(1, [x(0)]))
        assert sample_shots(state, [0], 100, 0) == {"1": 100}

    def test_empty_measurement_list_rejected(self):
        with pytest.raises(ValueError):
            sample_shots(simulate(Circuit(1, [])), [], 10, 0)

    def test_single_cx_and_cry_counts(self):
        one = transpile_to_basis(Circuit(2, [cx(0, 1)]))
        assert one.two_qubit_count == 1 and one.depth == 1
        assert transpile_to_basis(Circuit(2, [cry(0, 1, 0.4)])).two_qubit_count == 2

    def test_unsupported_kind_is_transpile_error(self):
        gate = x(0)
        object.__setattr__(gate, "kind", "U3")
        with pytest.raises(TranspileError):
            transpile_to_basis(Circuit(1, [gate]))
