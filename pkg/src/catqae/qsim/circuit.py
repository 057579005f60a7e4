"""Gate and circuit containers shared by the simulator and the transpiler."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class InvalidGateError(ValueError):
    """A gate references qubits or parameters that do not fit its circuit."""


# Gate kinds and whether they carry a rotation angle.
GATE_KINDS = {
    "RY": True,
    "CRY": True,
    "MCRY": True,
    "RZ": True,
    "X": False,
    "H": False,
    "Z": False,
    "SX": False,
    "CX": False,
    "MCX": False,
}

# Number of control qubits fixed by the kind; None means "any".
_FIXED_CONTROLS = {
    "RY": 0, "RZ": 0, "X": 0, "H": 0, "Z": 0, "SX": 0,
    "CRY": 1, "CX": 1,
    "MCRY": None, "MCX": None,
}


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[int, ...] = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InvalidGateError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        n_ctrl = _FIXED_CONTROLS[self.kind]
        if n_ctrl is not None and len(self.controls) != n_ctrl:
            raise InvalidGateError(
                f"{self.kind} takes {n_ctrl} control(s), got {len(self.controls)}"
            )
        if self.target in self.controls:
            raise InvalidGateError(f"target {self.target} is also a control")
        if len(set(self.controls)) != len(self.controls):
            raise InvalidGateError(f"repeated control in {self.controls}")
        if GATE_KINDS[self.kind] and not math.isfinite(self.angle):
            raise InvalidGateError(f"non-finite angle {self.angle}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def validate(self, num_qubits: int) -> None:
        for q in self.qubits:
            if q < 0 or q >= num_qubits:
                raise InvalidGateError(
                    f"{self.kind} acts on qubit {q}, circuit has {num_qubits}"
                )

    def inverse(self) -> "Gate":
        if self.kind in ("RY", "CRY", "MCRY", "RZ"):
            return Gate(self.kind, self.target, self.controls, -self.angle)
        if self.kind == "SX":
            raise InvalidGateError("SX inverse is not in the gate set")
        return self  # X, H, Z, CX, MCX are self-inverse

    def __str__(self) -> str:
        args = ""
        if GATE_KINDS[self.kind]:
            args = f"({self.angle:.6g})"
        ctrl = f" c={list(self.controls)}" if self.controls else ""
        return f"{self.kind}{args} t={self.target}{ctrl}"


# Constructors, mostly to keep call sites short.
def ry(target: int, angle: float) -> Gate:
    return Gate("RY", target, (), angle)


def rz(target: int, angle: float) -> Gate:
    return Gate("RZ", target, (), angle)


def cry(control: int, target: int, angle: float) -> Gate:
    return Gate("CRY", target, (control,), angle)


def mcry(controls: Sequence[int], target: int, angle: float) -> Gate:
    controls = tuple(controls)
    if len(controls) == 0:
        return ry(target, angle)
    if len(controls) == 1:
        return cry(controls[0], target, angle)
    return Gate("MCRY", target, controls, angle)


def x(target: int) -> Gate:
    return Gate("X", target)


def h(target: int) -> Gate:
    return Gate("H", target)


def z(target: int) -> Gate:
    return Gate("Z", target)


def sx(target: int) -> Gate:
    return Gate("SX", target)


def cx(control: int, target: int) -> Gate:
    return Gate("CX", target, (control,))


def mcx(controls: Sequence[int], target: int) -> Gate:
    controls = tuple(controls)
    if len(controls) == 0:
        return x(target)
    if len(controls) == 1:
        return cx(controls[0], target)
    return Gate("MCX", target, controls)


@dataclass
class Circuit:
    """Ordered gate list over a fixed number of qubits.

    Qubit 0 is the least significant bit of a basis-state index.
    """

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidGateError("circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            g.validate(self.num_qubits)

    def append(self, gate: Gate) -> "Circuit":
        gate.validate(self.num_qubits)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def compose(self, other: "Circuit") -> "Circuit":
        """Return a new circuit running ``self`` then ``other``."""
        if other.num_qubits > self.num_qubits:
            raise InvalidGateError("cannot compose a wider circuit")
        return Circuit(self.num_qubits, self.gates + other.gates, self.label)

    def inverse(self) -> "Circuit":
        return Circuit(
            self.num_qubits,
            [g.inverse() for g in reversed(self.gates)],
            f"{self.label}^dg" if self.label else "",
        )

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts
