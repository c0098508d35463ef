"""Minimum-input trajectory synthesis under a formula constraint.

The model has states x_<dim>_<k> for k = 0..H with x_0 pinned, inputs
u_<name>_<k> for k = 0..H-1 split as u = upos - uneg, the dynamics as
equality rows, the formula's root binary fixed to 1 and the objective
sum(upos + uneg).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field

from aware_stl.config import Config
from aware_stl.encoder import EncodingContext, encode
from aware_stl.exceptions import HorizonTooShortError, MonitorMismatchError
from aware_stl.formula.ast import Formula
from aware_stl.formula.horizon import horizon as formula_horizon
from aware_stl.formula.validate import ensure_valid
from aware_stl.milp import MilpModel, Sense, SolveStats, SolveStatus, VarRef, export_lp, solve
from aware_stl.monitor import RobustnessReport, Signal, robustness
from aware_stl.synthesis.system import LinearSystem

logger = logging.getLogger(__name__)


@dataclass
class SynthesisProblem:
    system: LinearSystem
    spec: Formula
    horizon: int
    input_bounds: Sequence[tuple[float, float]] | None = None
    big_m: float | None = None
    name: str = "synthesis"

    def required_steps(self) -> int:
        seconds = formula_horizon(self.spec, self.system.delta_t)
        return int(math.ceil(seconds / self.system.delta_t - 1e-9))

    def bounds_array(self, default: float) -> tuple[np.ndarray, np.ndarray]:
        if self.input_bounds is None:
            return np.full(self.system.m, -default), np.full(self.system.m, default)
        pairs = np.asarray(self.input_bounds, dtype=float).reshape(self.system.m, 2)
        return pairs[:, 0].copy(), pairs[:, 1].copy()


@dataclass
class EncodedProblem:
    """A built model together with the variables synthesis reads back."""

    problem: SynthesisProblem
    model: MilpModel
    states: list[list[VarRef]]
    inputs: list[list[VarRef]]
    positive: list[list[VarRef]]
    negative: list[list[VarRef]]
    root: VarRef
    context: EncodingContext


class SynthesisSummary(BaseModel):
    name: str
    status: str
    cost: float | None = Field(None, description="Sum of |u| over all steps and inputs")
    robustness: float | None = None
    satisfied: bool | None = None
    nodes: int = 0
    iterations: int = 0
    wall_time: float = 0.0
    horizon: int
    binaries: int
    rows: int
    dynamics_residual: float | None = None
    split_residual: float | None = None


@dataclass
class SynthesisResult:
    problem: SynthesisProblem
    status: SolveStatus
    states: np.ndarray | None
    inputs: np.ndarray | None
    cost: float | None
    stats: SolveStats = field(default_factory=SolveStats)
    robustness: RobustnessReport | None = None
    dynamics_residual: float | None = None
    split_residual: float | None = None
    binaries: int = 0
    rows: int = 0

    @property
    def has_trajectory(self) -> bool:
        return self.states is not None

    def signal(self) -> Signal:
        if self.states is None:
            raise ValueError(f"no trajectory (status {self.status.value})")
        return Signal(self.problem.system.delta_t, self.problem.system.dims, self.states)

    def summary(self) -> SynthesisSummary:
        return SynthesisSummary(
            name=self.problem.name,
            status=self.status.value,
            cost=self.cost,
            robustness=None if self.robustness is None else self.robustness.value,
            satisfied=None if self.robustness is None else self.robustness.satisfied,
            nodes=self.stats.nodes,
            iterations=self.stats.iterations,
            wall_time=self.stats.wall_time,
            horizon=self.problem.horizon,
            binaries=self.binaries,
            rows=self.rows,
            dynamics_residual=self.dynamics_residual,
            split_residual=self.split_residual,
        )


def build_encoded(problem: SynthesisProblem, config: Config | None = None) -> EncodedProblem:
    config = config or Config()
    system = problem.system
    ensure_valid(problem.spec, system.delta_t, system.dims)
    required = problem.required_steps()
    if problem.horizon < required:
        raise HorizonTooShortError(
            f"horizon of {problem.horizon} steps is shorter than the {required} steps the formula needs"
        )
    H = problem.horizon
    u_lo, u_hi = problem.bounds_array(config.synthesis.input_bound)
    x_lo, x_hi = system.state_bounds(H, u_lo, u_hi)

    model = MilpModel(problem.name)
    model.notes += [
        "x_<dim>_<k>: state <dim> at step k",
        "u_<input>_<k> = upos_<input>_<k> - uneg_<input>_<k>: input at step k split by sign",
    ]
    states = [
        [model.add_var(f"x_{dim}_{k}", lo=x_lo[k, i], hi=x_hi[k, i]) for i, dim in enumerate(system.dims)]
        for k in range(H + 1)
    ]
    inputs: list[list[VarRef]] = []
    positive: list[list[VarRef]] = []
    negative: list[list[VarRef]] = []
    for k in range(H):
        inputs.append([model.add_var(f"u_{name}_{k}", lo=u_lo[j], hi=u_hi[j]) for j, name in enumerate(system.inputs)])
        positive.append(
            [model.add_var(f"upos_{name}_{k}", lo=0.0, hi=max(u_hi[j], 0.0)) for j, name in enumerate(system.inputs)]
        )
        negative.append(
            [model.add_var(f"uneg_{name}_{k}", lo=0.0, hi=max(-u_lo[j], 0.0)) for j, name in enumerate(system.inputs)]
        )

    for i, dim in enumerate(system.dims):
        model.add_constraint([(states[0][i], 1.0)], Sense.EQ, system.x0[i], name=f"init_{dim}")
    for k in range(H):
        for j, name in enumerate(system.inputs):
            model.add_constraint(
                [(inputs[k][j], 1.0), (positive[k][j], -1.0), (negative[k][j], 1.0)],
                Sense.EQ,
                0.0,
                name=f"split_{name}_{k}",
            )
        for i, dim in enumerate(system.dims):
            row = [(states[k + 1][i], 1.0)]
            row += [(states[k][c], -system.A[i, c]) for c in range(system.n) if system.A[i, c] != 0]
            row += [(inputs[k][j], -system.B[i, j]) for j in range(system.m) if system.B[i, j] != 0]
            model.add_constraint(row, Sense.EQ, 0.0, name=f"dyn_{dim}_{k}")
    model.minimize([(var, 1.0) for k in range(H) for var in positive[k] + negative[k]])

    table = {(dim, k): states[k][i] for k in range(H + 1) for i, dim in enumerate(system.dims)}
    big_m = problem.big_m if problem.big_m is not None else config.encoder.big_m
    context = EncodingContext(model, system.delta_t, H, table, big_m=big_m, tighten=config.encoder.tighten)
    root = encode(problem.spec, context, 0)
    model.add_constraint([(root, 1.0)], Sense.EQ, 1.0, name="spec")
    root = model.set_bounds(root, 1.0, 1.0)
    logger.info(
        f"Built {model.name}: {len(model.variables)} variables, {model.num_binaries} binaries, "
        f"{len(model.constraints)} rows"
    )
    return EncodedProblem(problem, model, states, inputs, positive, negative, root, context)


def build(problem: SynthesisProblem, config: Config | None = None) -> MilpModel:
    return build_encoded(problem, config).model


def synthesize(
    problem: SynthesisProblem,
    config: Config | None = None,
    export_path: str | Path | None = None,
) -> SynthesisResult:
    """Solve the synthesis MILP and check the trajectory with the monitor.

    Raises ``MonitorMismatchError`` when an optimal trajectory has robustness
    below ``-monitor_tol``.
    """
    config = config or Config()
    encoded = build_encoded(problem, config)
    model = encoded.model
    if export_path is not None:
        Path(export_path).write_text(export_lp(model))
        logger.info(f"Wrote LP model to {export_path}")

    solved = solve(model, config.solver)
    result = SynthesisResult(
        problem=problem,
        status=solved.status,
        states=None,
        inputs=None,
        cost=None,
        stats=solved.stats,
        binaries=model.num_binaries,
        rows=len(model.constraints),
    )
    if solved.values is None:
        logger.info(f"{problem.name}: no trajectory ({solved.status.value})")
        return result

    values = solved.values

    def grid(rows: list[list[VarRef]]) -> np.ndarray:
        return np.array([[values[var.index] for var in row] for row in rows], dtype=float)

    states = grid(encoded.states)
    inputs = grid(encoded.inputs).reshape(problem.horizon, problem.system.m)
    upos = grid(encoded.positive).reshape(inputs.shape)
    uneg = grid(encoded.negative).reshape(inputs.shape)
    result.states = states
    result.inputs = inputs
    result.cost = float(np.sum(np.abs(inputs)))
    result.split_residual = float(np.max(upos * uneg)) if inputs.size else 0.0
    result.dynamics_residual = problem.system.residual(states, inputs)
    result.robustness = robustness(result.signal(), problem.spec, 0)

    tol = config.synthesis.monitor_tol
    if solved.status == SolveStatus.OPTIMAL and result.robustness.value < -tol:
        raise MonitorMismatchError(
            f"{problem.name}: optimal trajectory has robustness {result.robustness.value:.3g} < -{tol:g}"
        )
    logger.info(
        f"{problem.name}: {solved.status.value} cost={result.cost:.6f} "
        f"robustness={result.robustness.value:.6g} time={solved.stats.wall_time:.2f}s"
    )
    return result
