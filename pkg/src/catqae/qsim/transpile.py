"""Lowering of logical circuits to the {CX, RZ, SX, X} basis.

Rules (all deterministic):

* one-qubit gates -> RZ . SX . RZ . SX . RZ (diagonal gates collapse to one RZ)
* CRY / MCRY / multi-controlled RZ with m controls -> 2**m target rotations
  interleaved with 2**m CX following a Gray-code walk over the controls
* MCX -> H . (multi-controlled Z) . H, with multi-controlled Z built from a
  chain of multi-controlled RZ gates of shrinking width
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, InvalidGateError, cx, rz, sx
from .simulator import base_matrix, run_batch

BASIS = frozenset({"CX", "RZ", "SX", "X"})
_ANGLE_EPS = 1e-12


class TranspileError(ValueError):
    pass


@dataclass
class BasisCircuit:
    circuit: Circuit
    two_qubit_count: int = 0
    depth: int = 0
    total_gates: int = 0
    source_label: str = ""

    @property
    def gates(self) -> list[Gate]:
        return self.circuit.gates

    @property
    def metrics(self) -> dict[str, int]:
        return {
            "two_qubit_count": self.two_qubit_count,
            "depth": self.depth,
            "total_gates": self.total_gates,
        }


def circuit_depth(circuit: Circuit) -> int:
    """Longest qubit-wise dependency chain."""
    front = [0] * circuit.num_qubits
    for g in circuit.gates:
        layer = 1 + max(front[q] for q in g.qubits)
        for q in g.qubits:
            front[q] = layer
    return max(front, default=0)


def _wrap(angle: float) -> float:
    """Reduce to (-2pi, 2pi]; RZ has period 4pi but 2pi only costs a global phase."""
    return math.remainder(angle, 2 * math.pi)


def _is_zero(angle: float) -> bool:
    return abs(_wrap(angle)) < _ANGLE_EPS


def zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Angles (theta, phi, lam) with u ~ RZ(phi) RY(theta) RZ(lam) up to phase."""
    det = np.linalg.det(u)
    v = u / np.sqrt(det)
    a, b = v[0, 0], v[1, 0]
    theta = 2.0 * math.atan2(abs(b), abs(a))
    # v = [[e^{-i(phi+lam)/2} c, .], [e^{i(phi-lam)/2} s, .]]
    plus = -2.0 * np.angle(a) if abs(a) > 1e-14 else 0.0
    minus = 2.0 * np.angle(b) if abs(b) > 1e-14 else 0.0
    phi = 0.5 * (plus + minus)
    lam = 0.5 * (plus - minus)
    return theta, phi, lam


def euler_zsx(u: np.ndarray, qubit: int) -> list[Gate]:
    """RZ-SX-RZ-SX-RZ sequence equal to ``u`` up to global phase."""
    theta, phi, lam = zyz_angles(u)
    if _is_zero(theta):
        total = phi + lam
        return [] if _is_zero(total) else [rz(qubit, _wrap(total))]
    out = []
    for gate in (
        rz(qubit, _wrap(lam)),
        sx(qubit),
        rz(qubit, _wrap(theta + math.pi)),
        sx(qubit),
        rz(qubit, _wrap(phi + math.pi)),
    ):
        if gate.kind == "RZ" and _is_zero(gate.angle):
            continue
        out.append(gate)
    return out


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def gray_code_rotation(
    axis: str, angle: float, controls: Sequence[int], target: int
) -> list[Gate]:
    """Multi-controlled RY/RZ as 2**m rotations and 2**m CX (Gray-code order).

    The rotation angles solve the Walsh system for the uniformly controlled
    rotation whose only nonzero angle sits on the all-ones control state.
    """
    m = len(controls)
    if axis not in ("y", "z"):
        raise TranspileError(f"unsupported rotation axis {axis}")
    if m == 0:
        return [_rotation(axis, target, angle)]
    size = 2**m
    out: list[Gate] = []
    for i in range(size):
        g = _gray(i)
        sign = -1.0 if bin(g).count("1") % 2 else 1.0
        out.append(_rotation(axis, target, sign * angle / size))
        changed = g ^ _gray((i + 1) % size)
        bit = changed.bit_length() - 1
        out.append(cx(controls[bit], target))
    return out


def _rotation(axis: str, target: int, angle: float) -> Gate:
    return Gate("RY" if axis == "y" else "RZ", target, (), angle)


def multi_controlled_phase(angle: float, qubits: Sequence[int]) -> list[Gate]:
    """Phase e^{i angle} on the all-ones state of ``qubits`` (up to global phase)."""
    qubits = list(qubits)
    out: list[Gate] = []
    while qubits:
        target = qubits[-1]
        controls = qubits[:-1]
        out.extend(gray_code_rotation("z", angle, controls, target))
        angle /= 2.0
        qubits = controls
    return out


def _lower_logical(gate: Gate) -> list[Gate]:
    """Rewrite one logical gate into RY/RZ/H/SX/X/CX (single-qubit gates unresolved)."""
    kind = gate.kind
    if kind in ("CRY", "MCRY"):
        return gray_code_rotation("y", gate.angle, gate.controls, gate.target)
    if kind == "MCX":
        t = gate.target
        body = multi_controlled_phase(math.pi, list(gate.controls) + [t])
        return [Gate("H", t)] + body + [Gate("H", t)]
    if kind in ("RY", "RZ", "H", "Z", "SX", "X", "CX"):
        return [gate]
    raise TranspileError(f"cannot transpile gate kind {kind!r}")


def _to_basis(gate: Gate) -> list[Gate]:
    if gate.kind in ("CX", "SX", "X"):
        return [gate]
    if gate.kind == "RZ":
        return [] if _is_zero(gate.angle) else [rz(gate.target, _wrap(gate.angle))]
    if gate.kind in ("RY", "H", "Z"):
        return euler_zsx(base_matrix(gate), gate.target)
    raise TranspileError(f"unexpected intermediate gate {gate.kind}")


def transpile_to_basis(circuit: Circuit) -> BasisCircuit:
    gates: list[Gate] = []
    for logical in circuit.gates:
        for g in _lower_logical(logical):
            gates.extend(_to_basis(g))
    out = Circuit(circuit.num_qubits, gates, circuit.label)
    return BasisCircuit(
        circuit=out,
        two_qubit_count=sum(1 for g in gates if g.kind == "CX"),
        depth=circuit_depth(out),
        total_gates=len(gates),
        source_label=circuit.label,
    )


def unitary_equivalence_error(
    a: Circuit, b: Circuit, n_states: int = 20, seed: int = 0
) -> float:
    """Max deviation between the two circuits on random states, modulo one global phase.

    Returns max_i |<a psi_i | b psi_i> - c| where c is the overlap on the
    first state normalised to unit modulus; zero means equal unitaries up to
    a common phase.
    """
    if a.num_qubits != b.num_qubits:
        raise InvalidGateError("circuits differ in width")
    rng = np.random.default_rng(seed)
    dim = 2**a.num_qubits
    psi = rng.normal(size=(n_states, dim)) + 1j * rng.normal(size=(n_states, dim))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    out_a = run_batch(a, psi.copy())
    out_b = run_batch(b, psi.copy())
    overlaps = np.einsum("ij,ij->i", out_a.conj(), out_b)
    phase = overlaps[0] / abs(overlaps[0])
    return float(np.max(np.abs(overlaps - phase)))


__all__ = [
    "BASIS",
    "BasisCircuit",
    "TranspileError",
    "circuit_depth",
    "euler_zsx",
    "gray_code_rotation",
    "multi_controlled_phase",
    "transpile_to_basis",
    "unitary_equivalence_error",
]
