from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from aware_stl.milp.model import MilpModel, VarRef


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    NODE_LIMIT = "node_limit"
    TIME_LIMIT = "time_limit"

    @property
    def is_limit(self) -> bool:
        return self in (SolveStatus.NODE_LIMIT, SolveStatus.TIME_LIMIT)


@dataclass
class SolveStats:
    nodes: int = 0
    iterations: int = 0
    wall_time: float = 0.0

    def absorb(self, other: "SolveStats") -> None:
        self.iterations += other.iterations


@dataclass
class SolveResult:
    """Outcome of an LP or MILP solve.

    ``values`` is indexed by variable index and is present whenever a
    feasible point is known, including an incumbent under a limit status.
    ``duals`` holds one multiplier per model row for LP solves.
    """

    status: SolveStatus
    objective: float | None = None
    values: np.ndarray | None = None
    stats: SolveStats = field(default_factory=SolveStats)
    duals: np.ndarray | None = None
    bound: float | None = None

    def value(self, var: VarRef) -> float:
        if self.values is None:
            raise ValueError(f"no solution available (status {self.status.value})")
        return float(self.values[var.index])

    def assignment(self, model: MilpModel) -> dict[VarRef, float]:
        if self.values is None:
            return {}
        return {var: float(self.values[var.index]) for var in model.variables}

    def nonzero(self, model: MilpModel, tol: float = 1e-9) -> dict[str, float]:
        return {var.name: value for var, value in self.assignment(model).items() if abs(value) > tol}
