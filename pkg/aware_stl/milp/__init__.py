"""Mixed-integer linear programs: model, simplex, branch-and-bound and LP text."""

from aware_stl.config import SolverConfig
from aware_stl.milp.branch_and_bound import BranchAndBound, solve_milp
from aware_stl.milp.lp_format import export_lp, read_lp
from aware_stl.milp.model import LinConstraint, MilpModel, Sense, VarKind, VarRef
from aware_stl.milp.results import SolveResult, SolveStats, SolveStatus
from aware_stl.milp.simplex import LpRelaxation, solve_lp


def solve(model: MilpModel, config: SolverConfig | None = None) -> SolveResult:
    """Solve with the backend named in ``config``."""
    config = config or SolverConfig()
    if config.backend == "highs":
        from aware_stl.milp.highs import solve_with_highs

        return solve_with_highs(model, config)
    return solve_milp(model, config)


__all__ = [
    "BranchAndBound",
    "LinConstraint",
    "LpRelaxation",
    "MilpModel",
    "Sense",
    "SolveResult",
    "SolveStats",
    "SolveStatus",
    "VarKind",
    "VarRef",
    "export_lp",
    "read_lp",
    "solve",
    "solve_lp",
    "solve_milp",
]
