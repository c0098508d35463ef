"""Best-first branch-and-bound over binaries."""

from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from aware_stl.config import SolverConfig
from aware_stl.milp.model import MilpModel
from aware_stl.milp.results import SolveResult, SolveStats, SolveStatus
from aware_stl.milp.simplex import LpRelaxation

logger = logging.getLogger(__name__)


@dataclass(order=True)
class _Node:
    bound: float
    neg_depth: int
    seq: int
    lower: np.ndarray = field(compare=False)
    upper: np.ndarray = field(compare=False)
    branch_var: int = field(compare=False)


class BranchAndBound:
    """Search state for one MILP solve.

    Children are solved as soon as they are created so the heap is keyed by
    their own LP bound. Nodes are popped by (bound, deeper first, creation
    order), which makes the search deterministic for a given model.
    """

    def __init__(self, model: MilpModel, config: SolverConfig | None = None):
        self.model = model
        self.config = config or SolverConfig()
        self.relaxation = LpRelaxation(model, self.config)
        self.binaries = np.array([var.index for var in model.binaries], dtype=int)
        self.stats = SolveStats()
        self.incumbent: np.ndarray | None = None
        self.incumbent_value = math.inf
        self._heap: list[_Node] = []
        self._seq = 0
        self._started = 0.0
        self._next_log = self.config.log_every

    def solve(self) -> SolveResult:
        self._started = time.perf_counter()
        lower, upper = self.relaxation.lower.copy(), self.relaxation.upper.copy()
        root = self._solve_node(lower, upper)
        if root.status == SolveStatus.UNBOUNDED:
            return self._finish(SolveStatus.UNBOUNDED)
        if root.status == SolveStatus.INFEASIBLE:
            return self._finish(SolveStatus.INFEASIBLE)
        self._consider(root, lower, upper, depth=0)

        gap = self.config.optimality_gap
        while self._heap:
            limit = self._limit_reached()
            if limit is not None:
                return self._finish(limit)
            node = heapq.heappop(self._heap)
            if node.bound >= self.incumbent_value - gap:
                continue
            j = node.branch_var
            down_upper = node.upper.copy()
            down_upper[j] = 0.0
            up_lower = node.lower.copy()
            up_lower[j] = 1.0
            depth = -node.neg_depth + 1
            for child_lower, child_upper in ((node.lower, down_upper), (up_lower, node.upper)):
                result = self._solve_node(child_lower, child_upper)
                self._consider(result, child_lower, child_upper, depth)
            if self.stats.nodes >= self._next_log:
                self._next_log += self.config.log_every
                logger.debug(
                    f"B&B nodes={self.stats.nodes} open={len(self._heap)} "
                    f"incumbent={self.incumbent_value:.9g} bound={self._best_bound():.9g}"
                )
        return self._finish(SolveStatus.OPTIMAL if self.incumbent is not None else SolveStatus.INFEASIBLE)

    def _solve_node(self, lower: np.ndarray, upper: np.ndarray) -> SolveResult:
        self.stats.nodes += 1
        result = self.relaxation.solve(lower, upper)
        self.stats.absorb(result.stats)
        return result

    def _consider(self, result: SolveResult, lower: np.ndarray, upper: np.ndarray, depth: int) -> None:
        if result.status != SolveStatus.OPTIMAL or result.values is None:
            return
        if result.objective >= self.incumbent_value - self.config.optimality_gap:
            return
        j = self._branch_variable(result.values)
        if j is None:
            self._accept(result, lower, upper)
            return
        self._seq += 1
        heapq.heappush(self._heap, _Node(result.objective, -depth, self._seq, lower, upper, j))

    def _branch_variable(self, values: np.ndarray) -> int | None:
        """Most fractional binary; ties go to the lowest index."""
        if not len(self.binaries):
            return None
        part = values[self.binaries]
        distance = np.abs(part - np.round(part))
        if distance.max() <= self.config.integrality_tol:
            return None
        return int(self.binaries[int(np.argmax(distance))])

    def _accept(self, result: SolveResult, lower: np.ndarray, upper: np.ndarray) -> None:
        values, objective = self._polish(result, lower, upper)
        if objective < self.incumbent_value:
            self.incumbent = values
            self.incumbent_value = objective
            logger.debug(f"New incumbent {objective:.9g} after {self.stats.nodes} nodes")

    def _polish(self, result: SolveResult, lower: np.ndarray, upper: np.ndarray) -> tuple[np.ndarray, float]:
        """Re-solve with binaries fixed to their rounded values."""
        rounded = np.round(result.values[self.binaries])
        fixed_lower, fixed_upper = lower.copy(), upper.copy()
        fixed_lower[self.binaries] = rounded
        fixed_upper[self.binaries] = rounded
        polished = self.relaxation.solve(fixed_lower, fixed_upper)
        self.stats.absorb(polished.stats)
        if polished.status == SolveStatus.OPTIMAL and polished.values is not None:
            return polished.values, polished.objective
        values = result.values.copy()
        values[self.binaries] = rounded
        return values, self.model.objective_value(values)

    def _best_bound(self) -> float:
        if not self._heap:
            return self.incumbent_value
        return min(self._heap[0].bound, self.incumbent_value)

    def _limit_reached(self) -> SolveStatus | None:
        if self.stats.nodes >= self.config.node_limit:
            return SolveStatus.NODE_LIMIT
        if time.perf_counter() - self._started >= self.config.time_limit:
            return SolveStatus.TIME_LIMIT
        return None

    def _finish(self, status: SolveStatus) -> SolveResult:
        self.stats.wall_time = time.perf_counter() - self._started
        objective = None if self.incumbent is None else self.incumbent_value
        bound = objective if status == SolveStatus.OPTIMAL else self._best_bound()
        logger.info(
            f"MILP {self.model.name}: {status.value} objective={objective} nodes={self.stats.nodes} "
            f"pivots={self.stats.iterations} time={self.stats.wall_time:.2f}s"
        )
        return SolveResult(status, objective=objective, values=self.incumbent, stats=self.stats, bound=bound)


def solve_milp(model: MilpModel, config: SolverConfig | None = None) -> SolveResult:
    """Solve ``model`` to proven optimality within the absolute gap, or stop at a limit.

    Limit statuses carry the best incumbent found so far, if any.
    """
    return BranchAndBound(model, config).solve()
