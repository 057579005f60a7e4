"""Best-case wall-clock projection for a fault-tolerant amplitude-estimation run."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

CAVEATS = (
    "Optimistic bound only, not a break-even estimate.",
    "Assumes fault-tolerant execution of the full circuit depth with negligible "
    "logical error.",
    "Assumes the loss simulator can be compiled into a quantum oracle at the stated depth.",
    "Assumes enough qubits for adequate bin resolution; depth grows with bin count.",
    "Quantum queries are taken as sqrt(N), the ideal quadratic query advantage.",
)


@dataclass(frozen=True)
class ProjectionReport:
    classical_n: float
    classical_cost_s: float
    oracle_depth: float
    gate_time_s: float
    quantum_queries: float
    quantum_time_s: float
    classical_time_s: float
    ratio: float
    caveats: tuple = CAVEATS

    def to_dict(self) -> dict:
        return asdict(self)

    def render(self) -> str:
        lines = ["# Best-case resource projection"]
        lines += [f"# - {c}" for c in self.caveats]
        lines += [
            f"classical: N={self.classical_n:g} x {self.classical_cost_s:g} s "
            f"= {self.classical_time_s:g} s ({self.classical_time_s / 3600:.1f} h)",
            f"quantum:   sqrt(N)={self.quantum_queries:g} x depth {self.oracle_depth:g} x "
            f"{self.gate_time_s:g} s = {self.quantum_time_s:g} s",
            f"ratio (classical / quantum): {self.ratio:.4g}",
        ]
        return "\n".join(lines)


def resource_projection(classical_n: float, classical_cost_s: float, oracle_depth: float,
                        gate_time_s: float) -> ProjectionReport:
    """Classical N * T_c against sqrt(N) oracle calls of depth * t_g each."""
    for name, v in (("classical_n", classical_n), ("classical_cost_s", classical_cost_s),
                    ("oracle_depth", oracle_depth), ("gate_time_s", gate_time_s)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    classical = classical_n * classical_cost_s
    queries = math.sqrt(classical_n)
    quantum = queries * oracle_depth * gate_time_s
    return ProjectionReport(classical_n, classical_cost_s, oracle_depth, gate_time_s,
                            queries, quantum, classical, classical / quantum)
