"""Stochastic depolarizing and readout noise via per-shot trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit
from .simulator import (
    apply_gate_batch,
    format_counts,
    marginal_probabilities,
    sample_shots,
    simulate,
)

# Rows of statevector data processed together (bounded memory per batch).
_MAX_BATCH_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class NoisePreset:
    name: str
    p_1q: float = 0.0
    p_2q: float = 0.0
    p_readout: float = 0.0

    def __post_init__(self):
        for attr in ("p_1q", "p_2q", "p_readout"):
            v = getattr(self, attr)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{attr}={v} is not a probability")
        if self.name == "noiseless" and not self.is_noiseless:
            raise ValueError("the noiseless preset must have all rates zero")

    @property
    def is_noiseless(self) -> bool:
        return self.p_1q == 0.0 and self.p_2q == 0.0 and self.p_readout == 0.0


PRESETS = {
    "noiseless": NoisePreset("noiseless"),
    "low": NoisePreset("low", 0.001, 0.01, 0.005),
    "medium": NoisePreset("medium", 0.005, 0.05, 0.02),
    "high": NoisePreset("high", 0.01, 0.10, 0.05),
}


def get_preset(name: str) -> NoisePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown noise preset {name!r}; choose from {list(PRESETS)}")


def _popcount_table(dim: int) -> np.ndarray:
    table = np.zeros(dim, dtype=np.int64)
    for b in range(max(dim.bit_length() - 1, 0)):
        table += (np.arange(dim) >> b) & 1
    return table


def _pauli_masks(codes: np.ndarray, qubits: Sequence[int]):
    """Decode base-4 Pauli labels (0=I, 1=X, 2=Y, 3=Z per qubit) into bit masks."""
    xmask = np.zeros(codes.shape, dtype=np.int64)
    zmask = np.zeros(codes.shape, dtype=np.int64)
    for j, q in enumerate(qubits):
        digit = (codes >> (2 * j)) & 3
        xmask |= ((digit == 1) | (digit == 2)).astype(np.int64) << q
        zmask |= ((digit == 2) | (digit == 3)).astype(np.int64) << q
    return xmask, zmask


def apply_random_paulis(psi, rows, xmask, zmask, popcount) -> None:
    """Apply X^xmask Z^zmask to the selected rows of ``psi`` (global phases dropped)."""
    basis = np.arange(psi.shape[1])
    sign = 1 - 2 * (popcount[basis[None, :] & zmask[:, None]] & 1)
    sub = psi[rows] * sign
    out = np.empty_like(sub)
    np.put_along_axis(out, basis[None, :] ^ xmask[:, None], sub, axis=1)
    psi[rows] = out


def _run_trajectories(circuit, noise, measured_qubits, shots, rng):
    n = circuit.num_qubits
    dim = 2**n
    popcount = _popcount_table(dim)
    psi = np.zeros((shots, dim), dtype=complex)
    psi[:, 0] = 1.0
    for gate in circuit.gates:
        apply_gate_batch(psi, gate, n)
        k = len(gate.qubits)
        p = noise.p_1q if k == 1 else noise.p_2q
        if p <= 0.0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p)
        if hit.size == 0:
            continue
        # Uniform over all 4^k Paulis, identity included.
        codes = rng.integers(0, 4**k, size=hit.size)
        keep = codes != 0
        if not keep.any():
            continue
        rows = hit[keep]
        xmask, zmask = _pauli_masks(codes[keep], gate.qubits)
        apply_random_paulis(psi, rows, xmask, zmask, popcount)

    marg = marginal_probabilities(np.abs(psi) ** 2, measured_qubits)
    cdf = np.cumsum(marg, axis=1)
    u = rng.random(shots) * cdf[:, -1]
    cdf[:, -1] = np.inf
    outcomes = (cdf <= u[:, None]).sum(axis=1).astype(np.int64)
    if noise.p_readout > 0.0:
        for j in range(len(measured_qubits)):
            flip = rng.random(shots) < noise.p_readout
            outcomes ^= flip.astype(np.int64) << j
    return outcomes


def noisy_execute(
    circuit: Circuit,
    noise: NoisePreset,
    measured_qubits: Sequence[int],
    shots: int,
    rng_seed,
) -> dict[str, int]:
    """Sample ``shots`` noisy executions of ``circuit``.

    After each gate acting on k qubits, with probability p_1q (k=1) or p_2q
    (k>=2) a Pauli drawn uniformly from all 4^k (identity included) is applied
    to those qubits.  Each measured bit is then flipped independently with
    probability ``p_readout``.  The noiseless preset reduces to
    :func:`sample_shots` on the exact final state.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    measured_qubits = list(measured_qubits)
    if noise.is_noiseless:
        return sample_shots(simulate(circuit), measured_qubits, shots, rng_seed)

    rng = np.random.default_rng(rng_seed)
    per_batch = max(1, _MAX_BATCH_ELEMENTS // 2**circuit.num_qubits)
    chunks = []
    remaining = shots
    while remaining > 0:
        size = min(per_batch, remaining)
        chunks.append(_run_trajectories(circuit, noise, measured_qubits, size, rng))
        remaining -= size
    return format_counts(np.concatenate(chunks), len(measured_qubits))
