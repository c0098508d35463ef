"""Bounded-variable primal simplex on a dense tableau.

Every model variable is mapped to a column ``y`` in ``[0, U]`` (shifted by a
finite lower bound, mirrored from a finite upper bound, or split when free).
Rows get one slack each (none for equalities) and are scaled so the
right-hand side is non-negative. Rows whose slack cannot start basic get an
artificial column; phase one drives the artificials to zero and phase two
keeps them pinned at zero so the row multipliers can be read off the final
tableau.
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

PIVOT_TOL = 1e-9
ZERO_TOL = 1e-12
REFRESH_EVERY = 200

_SENSE_CODE = {Sense.LE: 1.0, Sense.GE: -1.0, Sense.EQ: 0.0}


class _Tableau:
    def __init__(
        self,
        matrix: np.ndarray,
        rhs: np.ndarray,
        basis: np.ndarray,
        upper: np.ndarray,
        config: SolverConfig,
        stats: SolveStats,
    ):
        self.matrix = matrix
        self.rhs = rhs
        self.t = matrix.copy()
        self.beta = rhs.copy()
        self.basis = basis.copy()
        self.initial_basis = basis.copy()
        self.upper = upper
        self.config = config
        self.stats = stats
        n = matrix.shape[1]
        self.is_basic = np.zeros(n, dtype=bool)
        self.is_basic[self.basis] = True
        self.at_upper = np.zeros(n, dtype=bool)
        self.degenerate = 0
        self.bland = False

    @property
    def rows(self) -> int:
        return self.t.shape[0]

    def basis_inverse(self) -> np.ndarray:
        return self.t[:, self.initial_basis]

    def refresh(self) -> None:
        """Recompute basic values from the original rows to shed drift."""
        effective = self.rhs - self.matrix[:, self.at_upper] @ self.upper[self.at_upper]
        self.beta = self.basis_inverse() @ effective

    def values(self) -> np.ndarray:
        y = np.where(self.at_upper, self.upper, 0.0)
        y[self.basis] = self.beta
        return y

    def optimize(self, cost: np.ndarray) -> SolveStatus:
        d = cost - cost[self.basis] @ self.t
        tol = self.config.feasibility_tol
        limit = max(10_000, 20 * (self.t.shape[0] + self.t.shape[1]))
        for count in range(1, limit + 1):
            j = self._entering(d, tol)
            if j is None:
                self.refresh()
                return SolveStatus.OPTIMAL
            direction = -1.0 if self.at_upper[j] else 1.0
            alpha = direction * self.t[:, j]
            r, theta = self._ratio(j, alpha)
            if not np.isfinite(theta):
                return SolveStatus.UNBOUNDED
            if theta <= ZERO_TOL:
                self.degenerate += 1
                if not self.bland and self.degenerate > self.config.bland_after:
                    logger.debug(f"Switching to Bland's rule after {self.degenerate} degenerate pivots")
                    self.bland = True
            if r < 0:
                self.beta -= theta * alpha
                self.at_upper[j] = not self.at_upper[j]
            else:
                self._pivot(r, j, theta, alpha, d)
            self.stats.iterations += 1
            if count % REFRESH_EVERY == 0:
                d = cost - cost[self.basis] @ self.t
                self.refresh()
        raise SolverError(f"simplex did not converge within {limit} iterations")

    def _entering(self, d: np.ndarray, tol: float) -> int | None:
        movable = ~self.is_basic & (self.upper > ZERO_TOL)
        improving = movable & np.where(self.at_upper, d > tol, d < -tol)
        if not improving.any():
            return None
        if self.bland:
            return int(np.flatnonzero(improving)[0])
        return int(np.argmax(np.where(improving, np.abs(d), -1.0)))

    def _ratio(self, j: int, alpha: np.ndarray) -> tuple[int, float]:
        """Row leaving the basis and the step length; row -1 means a bound flip."""
        flip = self.upper[j]
        if self.rows == 0:
            return -1, flip
        ratios = np.full(self.rows, np.inf)
        falling = alpha > PIVOT_TOL
        ratios[falling] = np.maximum(self.beta[falling], 0.0) / alpha[falling]
        basic_upper = self.upper[self.basis]
        rising = (alpha < -PIVOT_TOL) & np.isfinite(basic_upper)
        ratios[rising] = np.maximum(basic_upper[rising] - self.beta[rising], 0.0) / -alpha[rising]
        theta = float(ratios.min())
        if not np.isfinite(theta) or flip <= theta:
            return -1, flip
        ties = np.flatnonzero(ratios <= theta + ZERO_TOL)
        if self.bland:
            r = ties[np.argmin(self.basis[ties])]
        else:
            r = ties[np.argmax(np.abs(alpha[ties]))]
        return int(r), theta

    def _pivot(self, r: int, j: int, theta: float, alpha: np.ndarray, d: np.ndarray) -> None:
        entering_value = self.upper[j] - theta if self.at_upper[j] else theta
        self.beta -= theta * alpha
        leaving = self.basis[r]
        self.is_basic[leaving] = False
        self.at_upper[leaving] = alpha[r] < 0
        self.beta[r] = entering_value

        column = self.t[:, j].copy()
        pivot_row = self.t[r] / column[r]
        self.t -= np.outer(column, pivot_row)
        self.t[r] = pivot_row
        self.t[:, j] = 0.0
        self.t[r, j] = 1.0
        d -= d[j] * pivot_row
        d[j] = 0.0

        self.basis[r] = j
        self.is_basic[j] = True
        self.at_upper[j] = False


class LpRelaxation:
    """Continuous relaxation of a model, re-solvable under changed bounds."""

    def __init__(self, model: MilpModel, config: SolverConfig | None = None):
        self.model = model
        self.config = config or SolverConfig()
        self.a, senses, self.rhs, self.cost = model.matrix()
        self.sense_code = np.array([_SENSE_CODE[s] for s in senses], dtype=float)
        self.lower, self.upper = model.bounds()

    def solve(self, lower: np.ndarray | None = None, upper: np.ndarray | None = None) -> SolveResult:
        started = time.perf_counter()
        result = self._solve(
            self.lower if lower is None else lower,
            self.upper if upper is None else upper,
        )
        result.stats.wall_time = time.perf_counter() - started
        return result

    def _solve(self, lower: np.ndarray, upper: np.ndarray) -> SolveResult:
        stats = SolveStats()
        tol = self.config.feasibility_tol
        if np.any(lower > upper + tol):
            return SolveResult(SolveStatus.INFEASIBLE, stats=stats)

        # presolve: fix equal-bound columns, drop rows left empty
        with np.errstate(invalid="ignore"):
            fixed = (upper - lower) <= ZERO_TOL
        fixed_at = np.where(fixed, lower, 0.0)
        rhs = self.rhs - self.a[:, fixed] @ fixed_at[fixed]
        free = np.flatnonzero(~fixed)
        nonempty = np.any(np.abs(self.a[:, free]) > ZERO_TOL, axis=1)
        for i in np.flatnonzero(~nonempty):
            if not _holds(0.0, self.sense_code[i], rhs[i], tol):
                logger.debug(f"Row {self.model.constraints[i].name} is empty and violated")
                return SolveResult(SolveStatus.INFEASIBLE, stats=stats)
        rows = np.flatnonzero(nonempty)

        # structural columns y in [0, U] with x = offset + sign * y
        column_var: list[int] = []
        column_sign: list[float] = []
        column_upper: list[float] = []
        offsets = np.zeros(len(lower))
        for j in free:
            lo, hi = lower[j], upper[j]
            if np.isfinite(lo):
                offsets[j] = lo
                column_var.append(j)
                column_sign.append(1.0)
                column_upper.append(hi - lo)
            elif np.isfinite(hi):
                offsets[j] = hi
                column_var.append(j)
                column_sign.append(-1.0)
                column_upper.append(np.inf)
            else:
                column_var += [j, j]
                column_sign += [1.0, -1.0]
                column_upper += [np.inf, np.inf]
        var_index = np.array(column_var, dtype=int)
        signs = np.array(column_sign, dtype=float)

        a_rows = self.a[rows]
        structural = a_rows[:, var_index] * signs
        b = rhs[rows] - a_rows[:, free] @ offsets[free]
        code = self.sense_code[rows]
        m = len(rows)

        slack_rows = np.flatnonzero(code != 0.0)
        slacks = np.zeros((m, len(slack_rows)))
        slacks[slack_rows, np.arange(len(slack_rows))] = code[slack_rows]

        sigma = np.where(b < 0, -1.0, 1.0)
        structural *= sigma[:, None]
        slacks *= sigma[:, None]
        b = b * sigma

        basis = np.full(m, -1, dtype=int)
        n_struct, n_slack = len(var_index), len(slack_rows)
        slack_coef = code[slack_rows] * sigma[slack_rows]
        starts = slack_coef > 0
        basis[slack_rows[starts]] = n_struct + np.flatnonzero(starts)
        needs_artificial = np.flatnonzero(basis < 0)
        artificials = np.zeros((m, len(needs_artificial)))
        artificials[needs_artificial, np.arange(len(needs_artificial))] = 1.0
        first_artificial = n_struct + n_slack
        basis[needs_artificial] = first_artificial + np.arange(len(needs_artificial))

        matrix = np.hstack([structural, slacks, artificials]) if m else np.zeros((0, n_struct + n_slack))
        total = matrix.shape[1]
        col_upper = np.concatenate(
            [np.array(column_upper, dtype=float), np.full(n_slack + len(needs_artificial), np.inf)]
        )
        tableau = _Tableau(matrix, b, basis, col_upper, self.config, stats)

        if len(needs_artificial):
            phase_one = np.zeros(total)
            phase_one[first_artificial:] = 1.0
            tableau.optimize(phase_one)
            residual = tableau.values()[first_artificial:]
            scale = 1.0 + np.abs(b[needs_artificial])
            if np.any(residual > tol * scale):
                logger.debug(f"Phase one left artificial mass {residual.sum():.3g}")
                return SolveResult(SolveStatus.INFEASIBLE, stats=stats)
            col_upper[first_artificial:] = 0.0

        cost = np.zeros(total)
        cost[:n_struct] = self.cost[var_index] * signs
        status = tableau.optimize(cost)
        if status == SolveStatus.UNBOUNDED:
            return SolveResult(SolveStatus.UNBOUNDED, stats=stats)

        y = tableau.values()
        x = np.where(fixed, fixed_at, offsets)
        np.add.at(x, var_index, signs * y[:n_struct])
        duals = np.zeros(len(self.model.constraints))
        if m:
            duals[rows] = sigma * (cost[tableau.basis] @ tableau.basis_inverse())
        objective = self.model.objective_value(x)
        return SolveResult(SolveStatus.OPTIMAL, objective=objective, values=x, stats=stats, duals=duals, bound=objective)


def _holds(lhs: float, code: float, rhs: float, tol: float) -> bool:
    slack = tol * (1.0 + abs(rhs))
    if code > 0:
        return lhs <= rhs + slack
    if code < 0:
        return lhs >= rhs - slack
    return abs(lhs - rhs) <= slack


def solve_lp(model: MilpModel, config: SolverConfig | None = None) -> SolveResult:
    """Solve the continuous relaxation of ``model`` (binaries relaxed to [0, 1])."""
    result = LpRelaxation(model, config).solve()
    logger.debug(
        f"LP {model.name}: {result.status.value} objective={result.objective} "
        f"iterations={result.stats.iterations}"
    )
    return result
