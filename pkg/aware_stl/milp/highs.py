"""Optional external backend through ``scipy.optimize.milp`` (HiGHS).

Install with the ``highs`` extra.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from aware_stl.config import SolverConfig
from aware_stl.exceptions import SolverError
from aware_stl.milp.model import MilpModel, Sense
from aware_stl.milp.results import SolveResult, SolveStats, SolveStatus

logger = logging.getLogger(__name__)


def solve_with_highs(model: MilpModel, config: SolverConfig | None = None) -> SolveResult:
    try:
        from scipy.optimize import Bounds, LinearConstraint, milp
    except ImportError as exc:  # pragma: no cover
        raise SolverError("the highs backend needs scipy: pip install 'aware-stl[highs]'") from exc

    config = config or SolverConfig()
    a, senses, rhs, cost = model.matrix()
    lower_rows = np.array([-np.inf if s == Sense.LE else b for s, b in zip(senses, rhs)], dtype=float)
    upper_rows = np.array([np.inf if s == Sense.GE else b for s, b in zip(senses, rhs)], dtype=float)
    lower, upper = model.bounds()
    integrality = np.array([1 if var.is_binary else 0 for var in model.variables])
    constraints = [LinearConstraint(a, lower_rows, upper_rows)] if len(rhs) else []

    started = time.perf_counter()
    result = milp(
        cost,
        constraints=constraints,
        integrality=integrality,
        bounds=Bounds(lower, upper),
        options={
            "time_limit": config.time_limit,
            "node_limit": config.node_limit,
            "mip_rel_gap": 0.0,
        },
    )
    stats = SolveStats(
        nodes=int(getattr(result, "mip_node_count", 0) or 0),
        wall_time=time.perf_counter() - started,
    )
    values = None if result.x is None else np.asarray(result.x, dtype=float)
    status = {
        0: SolveStatus.OPTIMAL,
        2: SolveStatus.INFEASIBLE,
        3: SolveStatus.UNBOUNDED,
    }.get(result.status)
    if status is None:
        if result.status == 1:
            status = SolveStatus.TIME_LIMIT if stats.wall_time >= config.time_limit else SolveStatus.NODE_LIMIT
        else:
            raise SolverError(f"HiGHS failed: {result.message}")
    objective = None if values is None else model.objective_value(values)
    logger.info(f"HiGHS {model.name}: {status.value} objective={objective} time={stats.wall_time:.2f}s")
    return SolveResult(status, objective=objective, values=values, stats=stats, bound=getattr(result, "mip_dual_bound", None))
