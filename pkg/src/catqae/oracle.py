"""Amplitude-encoding oracle, Grover operator and the amplified estimator.

Register layout for an oracle over ``n`` index qubits: qubits ``0..n-1`` hold
the bin index (qubit ``n-1`` is its most significant bit) and qubit ``n`` is
the payoff ancilla.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dist import BinnedDistribution, DomainError, exact_on_bins
from .qsim import Circuit, NoisePreset, Statevector, noisy_execute, sample_shots, simulate
from .qsim.circuit import h, mcry, mcx, x, z
from .result import EstimatorResult


class AmplificationSafetyError(ValueError):
    """Requested Grover depth would alias the amplified angle past pi/2."""


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _toggle_to(circuit: Circuit, current: int, wanted: int, qubits: list[int]) -> int:
    """Emit X gates so that qubits[j] is flipped iff bit j of ``wanted`` is set."""
    diff = current ^ wanted
    for j, q in enumerate(qubits):
        if (diff >> j) & 1:
            circuit.append(x(q))
    return wanted


def build_state_prep(probs, num_qubits: int | None = None) -> Circuit:
    """Binary-tree loader mapping |0...0> to sum_i sqrt(p_i)|i>.

    Level ``l`` rotates qubit ``n-1-l`` conditioned on the ``l`` more
    significant qubits, one rotation per prefix with nonzero mass.  Controls
    that must read 0 are X-conjugated; prefixes are visited in Gray-code order
    so consecutive nodes differ by a single X.
    """
    if isinstance(probs, BinnedDistribution):
        probs = probs.probs
    p = np.asarray(probs, dtype=float)
    n = int(round(math.log2(p.size)))
    if p.size < 2 or 2**n != p.size:
        raise DomainError("probability vector length must be a power of two")
    if np.any(p < 0):
        raise DomainError("negative probability")
    if not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise DomainError(f"probabilities sum to {p.sum()}")
    width = n if num_qubits is None else num_qubits
    circuit = Circuit(width, label="state_prep")

    for level in range(n):
        target = n - 1 - level
        # controls[j] carries bit j (LSB first) of the prefix value
        controls = list(range(n - level, n))
        masses = p.reshape(2**level, 2, -1).sum(axis=2)
        flipped = 0
        for step in range(2**level):
            prefix = _gray(step)
            left, right = masses[prefix]
            if left + right <= 0.0 or right <= 0.0:
                continue  # unreachable subtree or no mass to move
            angle = 2.0 * math.atan2(math.sqrt(right), math.sqrt(left))
            flipped = _toggle_to(circuit, flipped, ~prefix & (2**level - 1), controls)
            circuit.append(mcry(controls, target, angle))
        _toggle_to(circuit, flipped, 0, controls)
    return circuit


@dataclass
class OracleSpec:
    binned: BinnedDistribution
    threshold: float
    f_max: float
    normalized_payoff: np.ndarray
    circuit_A: Circuit
    true_readout_prob: float
    _state_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_index(self) -> int:
        return self.binned.n_qubits

    @property
    def ancilla(self) -> int:
        return self.binned.n_qubits

    @property
    def num_qubits(self) -> int:
        return self.binned.n_qubits + 1

    @property
    def degenerate(self) -> bool:
        """Payoff is identically zero (threshold at or above every midpoint)."""
        return self.f_max <= 0.0

    @property
    def theta(self) -> float:
        return math.asin(math.sqrt(self.true_readout_prob))

    def final_state(self, k: int) -> Statevector:
        """Exact statevector after A and ``k`` Grover iterations (cached)."""
        if k not in self._state_cache:
            self._state_cache[k] = simulate(amplified_circuit(self, k))
        return self._state_cache[k]

    def ancilla_probability(self, k: int = 0) -> float:
        return self.final_state(k).probability_of_one(self.ancilla)


def build_oracle(binned: BinnedDistribution, threshold: float) -> OracleSpec:
    n = binned.n_qubits
    payoff = binned.payoff(threshold)
    f_max = float(payoff.max())
    norm = payoff / f_max if f_max > 0 else np.zeros_like(payoff)
    norm = np.clip(norm, 0.0, 1.0)

    circuit = build_state_prep(binned.probs, num_qubits=n + 1)
    circuit.label = "A"
    index_qubits = list(range(n))
    flipped = 0
    for i in np.flatnonzero(norm > 0):
        angle = 2.0 * math.asin(math.sqrt(norm[i]))
        flipped = _toggle_to(circuit, flipped, ~int(i) & (2**n - 1), index_qubits)
        circuit.append(mcry(index_qubits, n, angle))
    _toggle_to(circuit, flipped, 0, index_qubits)

    readout = float(np.dot(binned.probs, norm))
    return OracleSpec(binned, float(threshold), f_max, norm, circuit, readout)


def recover_excess(readout_prob: float, f_max: float) -> float:
    if not 0.0 <= readout_prob <= 1.0:
        raise DomainError(f"readout probability {readout_prob} outside [0, 1]")
    return readout_prob * f_max


def k_max(readout_prob: float) -> int | None:
    """Largest k with (2k+1) * theta < pi/2.

    Returns ``None`` when ``readout_prob`` is zero: nothing is marked, any k
    is harmless and the estimate is exactly zero, so callers pick their own cap.
    """
    if not 0.0 <= readout_prob <= 1.0:
        raise DomainError(f"readout probability {readout_prob} outside [0, 1]")
    if readout_prob == 0.0:
        return None
    theta = math.asin(math.sqrt(readout_prob))
    return max(0, math.floor((math.pi / (2 * theta) - 1) / 2))


def build_grover(oracle: OracleSpec) -> Circuit:
    """Q = A S0 A^dagger S_chi, as a circuit (S_chi acts first)."""
    n1 = oracle.num_qubits
    anc = oracle.ancilla
    others = list(range(n1 - 1))
    q = Circuit(n1, label="Q")
    q.append(z(anc))
    q.extend(oracle.circuit_A.inverse().gates)
    q.extend(x(i) for i in range(n1))
    q.append(h(anc))
    q.append(mcx(others, anc))
    q.append(h(anc))
    q.extend(x(i) for i in range(n1))
    q.extend(oracle.circuit_A.gates)
    return q


def amplified_circuit(oracle: OracleSpec, k: int) -> Circuit:
    """A followed by ``k`` copies of Q."""
    if k < 0:
        raise ValueError("k must be >= 0")
    circ = Circuit(oracle.num_qubits, list(oracle.circuit_A.gates), label=f"A.Q^{k}")
    if k:
        grover = build_grover(oracle).gates
        for _ in range(k):
            circ.extend(grover)
    return circ


def deamplify(p_meas: float, k: int) -> float:
    """Invert p = sin^2((2k+1) theta) back to sin^2(theta)."""
    if not 0.0 <= p_meas <= 1.0:
        raise DomainError(f"measured frequency {p_meas} outside [0, 1]")
    theta_hat = math.asin(math.sqrt(p_meas)) / (2 * k + 1)
    return math.sin(theta_hat) ** 2


@dataclass(frozen=True)
class QAEConfig:
    grover_k: int
    shots: int
    rng_seed: int = 0

    def __post_init__(self):
        if self.grover_k < 0:
            raise ValueError("grover_k must be >= 0")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


def check_safe(oracle: OracleSpec, k: int) -> None:
    limit = k_max(oracle.true_readout_prob)
    if limit is not None and k > limit:
        raise AmplificationSafetyError(
            f"k={k} exceeds k_max={limit} for P(|1>)={oracle.true_readout_prob:.6g}"
        )


def qae_estimate(
    oracle: OracleSpec,
    config: QAEConfig,
    noise: NoisePreset | None = None,
    rep_index: int = 0,
) -> EstimatorResult:
    """Grover-amplified estimate of the expected excess loss in dollars."""
    k = config.grover_k
    if oracle.degenerate:
        return EstimatorResult(0.0, 0, "qae", config.rng_seed, rep_index,
                               {"k": k, "shots": 0, "p_meas": 0.0})
    check_safe(oracle, k)
    anc = [oracle.ancilla]
    if noise is None or noise.is_noiseless:
        hist = sample_shots(oracle.final_state(k), anc, config.shots, config.rng_seed)
    else:
        hist = noisy_execute(amplified_circuit(oracle, k), noise, anc,
                             config.shots, config.rng_seed)
    p_meas = hist.get("1", 0) / config.shots
    estimate = recover_excess(deamplify(p_meas, k), oracle.f_max)
    return EstimatorResult(
        estimate,
        config.shots * (2 * k + 1),
        "qae",
        config.rng_seed,
        rep_index,
        {"k": k, "shots": config.shots, "p_meas": p_meas},
    )


def oracle_exact_excess(oracle: OracleSpec) -> float:
    return exact_on_bins(oracle.binned, oracle.threshold)
