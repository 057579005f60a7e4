"""Statevector simulation, noise trajectories and basis transpilation."""

from .circuit import (
    Circuit,
    Gate,
    InvalidGateError,
    cry,
    cx,
    h,
    mcry,
    mcx,
    ry,
    rz,
    sx,
    x,
    z,
)
from .noise import PRESETS, NoisePreset, get_preset, noisy_execute
from .simulator import (
    Statevector,
    apply_gate,
    frequency_of,
    gate_unitary,
    sample_shots,
    simulate,
)
from .transpile import (
    BasisCircuit,
    TranspileError,
    circuit_depth,
    transpile_to_basis,
    unitary_equivalence_error,
)
