"""Dense statevector simulation and shot sampling.

Amplitudes are indexed little-endian: basis index ``i`` has qubit ``q`` equal
to ``(i >> q) & 1``.  Internally every routine works on a 2-D array of shape
``(batch, 2**n)`` so that noise trajectories and equivalence checks can push
many states through a circuit at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, InvalidGateError

_SQRT_HALF = 1.0 / np.sqrt(2.0)
_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_H = np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex)


def ry_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(angle: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex
    )


def base_matrix(gate: Gate) -> np.ndarray:
    """2x2 unitary applied to the target when all controls are |1>."""
    kind = gate.kind
    if kind in ("RY", "CRY", "MCRY"):
        return ry_matrix(gate.angle)
    if kind == "RZ":
        return rz_matrix(gate.angle)
    if kind in ("X", "CX", "MCX"):
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "H":
        return _H
    if kind == "SX":
        return _SX
    raise InvalidGateError(f"no matrix for {kind}")


def gate_unitary(gate: Gate, num_qubits: int) -> np.ndarray:
    """Full 2**n x 2**n matrix of ``gate`` (built column by column)."""
    dim = 2**num_qubits
    return apply_gate_batch(np.eye(dim, dtype=complex), gate, num_qubits).T


@dataclass
class Statevector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size)))
        if amps.size < 2 or 2**n != amps.size:
            raise ValueError(f"length {amps.size} is not a power of two >= 2")
        self.amplitudes = amps

    @classmethod
    def zero(cls, num_qubits: int) -> "Statevector":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @property
    def num_qubits(self) -> int:
        return int(round(np.log2(self.amplitudes.size)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def marginal(self, qubits: Sequence[int]) -> np.ndarray:
        """Outcome distribution over ``qubits`` (``qubits[0]`` is the low bit)."""
        return marginal_probabilities(self.probabilities()[None, :], qubits)[0]

    def probability_of_one(self, qubit: int) -> float:
        return float(self.marginal([qubit])[1])


def _axis(qubit: int, num_qubits: int) -> int:
    # C-order reshape puts the most significant bit first; axis 0 is the batch.
    return 1 + (num_qubits - 1 - qubit)


def apply_gate_batch(psi: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    """Apply ``gate`` in place to every row of ``psi`` (shape (batch, 2**n))."""
    gate.validate(num_qubits)
    view = psi.reshape((psi.shape[0],) + (2,) * num_qubits)
    idx = [slice(None)] * (num_qubits + 1)
    for c in gate.controls:
        idx[_axis(c, num_qubits)] = 1
    t = _axis(gate.target, num_qubits)
    i0 = list(idx)
    i1 = list(idx)
    i0[t] = 0
    i1[t] = 1
    i0, i1 = tuple(i0), tuple(i1)

    kind = gate.kind
    if kind in ("X", "CX", "MCX"):
        a = view[i0].copy()
        view[i0] = view[i1]
        view[i1] = a
    elif kind == "Z":
        view[i1] *= -1
    elif kind == "RZ":
        view[i0] *= np.exp(-0.5j * gate.angle)
        view[i1] *= np.exp(0.5j * gate.angle)
    else:
        u = base_matrix(gate)
        a = view[i0].copy()
        b = view[i1].copy()
        view[i0] = u[0, 0] * a + u[0, 1] * b
        view[i1] = u[1, 0] * a + u[1, 1] * b
    return psi


def run_batch(circuit: Circuit, psi: np.ndarray) -> np.ndarray:
    """Push a batch of states through ``circuit`` in place."""
    for gate in circuit.gates:
        apply_gate_batch(psi, gate, circuit.num_qubits)
    return psi


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    psi = state.amplitudes.copy()[None, :]
    apply_gate_batch(psi, gate, state.num_qubits)
    return Statevector(psi[0])


def simulate(circuit: Circuit, initial: Statevector | None = None) -> Statevector:
    """Run ``circuit`` from |0...0> (or ``initial``) and return the final state."""
    if initial is None:
        psi = np.zeros((1, 2**circuit.num_qubits), dtype=complex)
        psi[0, 0] = 1.0
    else:
        if initial.num_qubits != circuit.num_qubits:
            raise InvalidGateError("initial state width does not match circuit")
        psi = initial.amplitudes.copy()[None, :]
    run_batch(circuit, psi)
    return Statevector(psi[0])


def outcome_index(num_qubits: int, qubits: Sequence[int]) -> np.ndarray:
    """Map each basis index to the integer read off ``qubits`` (low bit first)."""
    basis = np.arange(2**num_qubits)
    out = np.zeros_like(basis)
    for j, q in enumerate(qubits):
        out |= ((basis >> q) & 1) << j
    return out


def marginal_probabilities(probs: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Row-wise marginal distribution of ``probs`` (shape (batch, 2**n))."""
    qubits = list(qubits)
    if not qubits:
        raise ValueError("measured qubit list is empty")
    n = int(round(np.log2(probs.shape[1])))
    for q in qubits:
        if q < 0 or q >= n:
            raise InvalidGateError(f"measured qubit {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError("measured qubits must be distinct")
    m = len(qubits)
    onehot = np.zeros((probs.shape[1], 2**m))
    onehot[np.arange(probs.shape[1]), outcome_index(n, qubits)] = 1.0
    return probs @ onehot


def format_counts(outcomes: np.ndarray, width: int) -> dict[str, int]:
    """Histogram integer outcomes as bitstrings, most significant bit first."""
    values, counts = np.unique(outcomes, return_counts=True)
    return {format(int(v), f"0{width}b"): int(c) for v, c in zip(values, counts)}


def sample_shots(
    state: Statevector,
    measured_qubits: Sequence[int],
    shots: int,
    rng_seed,
) -> dict[str, int]:
    """Draw ``shots`` Born-rule samples of ``measured_qubits``.

    Keys are bitstrings with ``measured_qubits[0]`` as the rightmost character.
    ``rng_seed`` is anything accepted by ``numpy.random.default_rng``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.marginal(measured_qubits)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    rng = np.random.default_rng(rng_seed)
    counts = rng.multinomial(shots, probs)
    width = len(measured_qubits)
    return {
        format(v, f"0{width}b"): int(c) for v, c in enumerate(counts) if c > 0
    }


def frequency_of(hist: dict[str, int], outcome: str) -> float:
    total = sum(hist.values())
    return hist.get(outcome, 0) / total if total else 0.0
