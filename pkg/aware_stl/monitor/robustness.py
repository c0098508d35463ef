"""Discrete-time robustness of a signal against a formula.

Values follow the usual max/min recursion. Integral predicates sum
``g * delta_t`` over steps ``k + a/dt .. k + b/dt - 1`` (the last sample of
the window is not used) and derivative predicates use one-sided differences
divided by ``delta_t``, so their robustness is in rate units.
"""

from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel, Field

from aware_stl.exceptions import DerivativeAtBoundaryError, OutOfRangeError
from aware_stl.formula.ast import (
    And,
    DerivativePredicate,
    Eventually,
    Formula,
    Globally,
    IntegralPredicate,
    LinearExpr,
    Not,
    Or,
    Predicate,
    Side,
    core,
    node_ids,
)
from aware_stl.formula.validate import ensure_valid
from aware_stl.monitor.signal import Signal

logger = logging.getLogger(__name__)


class NodeValue(BaseModel):
    node_id: int
    formula: str
    step: int
    value: float


class RobustnessReport(BaseModel):
    value: float = Field(description="Robustness of the whole formula at the requested step")
    satisfied: bool = Field(description="True when value >= 0")
    step: int = 0
    per_node: list[NodeValue] = Field(default_factory=list)


class _Evaluator:
    def __init__(self, signal: Signal):
        self.signal = signal
        self.memo: dict[tuple[Formula, int], float] = {}
        self._columns: dict[LinearExpr, np.ndarray] = {}

    def series(self, expr: LinearExpr) -> np.ndarray:
        cached = self._columns.get(expr)
        if cached is None:
            cached = np.full(self.signal.length, expr.constant, dtype=float)
            for term in expr.terms:
                column = self.signal.column(term.name)
                cached = cached + term.coef * (np.abs(column) if term.absolute else column)
            self._columns[expr] = cached
        return cached

    def _require(self, node: Formula, first: int, last: int) -> None:
        if first < 0 or last > self.signal.last_step:
            raise OutOfRangeError(
                f"'{node}' needs samples {first}..{last}, signal has 0..{self.signal.last_step}"
            )

    def value(self, node: Formula, step: int) -> float:
        key = (node, step)
        if key in self.memo:
            return self.memo[key]
        result = self._compute(node, step)
        self.memo[key] = result
        return result

    def _compute(self, node: Formula, k: int) -> float:
        dt = self.signal.delta_t
        match node:
            case Predicate(expr=expr, threshold=c):
                self._require(node, k, k)
                return float(self.series(expr)[k]) - c
            case IntegralPredicate(expr=expr, bounds=bounds, threshold=c):
                a, b = bounds.steps(dt)
                self._require(node, k + a, k + b - 1)
                window = self.series(expr)[k + a : k + b]
                return float(np.sum(window)) * dt - c
            case DerivativePredicate(expr=expr, side=side, threshold=c):
                g = self.series(expr)
                self._require(node, k, k)
                if side == Side.RIGHT:
                    if k + 1 > self.signal.last_step:
                        raise DerivativeAtBoundaryError(f"'{node}' at step {k} needs step {k + 1}")
                    return (float(g[k + 1]) - float(g[k])) / dt - c
                if k < 1:
                    raise DerivativeAtBoundaryError(f"'{node}' at step {k} needs step {k - 1}")
                return (float(g[k]) - float(g[k - 1])) / dt - c
            case Not(child=child):
                return -self.value(child, k)
            case And(operands=ops):
                return min(self.value(op, k) for op in ops)
            case Or(operands=ops):
                return max(self.value(op, k) for op in ops)
            case Globally(interval=interval, child=child):
                lo, hi = interval.steps(dt)
                return min(self.value(child, j) for j in range(k + lo, k + hi + 1))
            case Eventually(interval=interval, child=child):
                lo, hi = interval.steps(dt)
                return max(self.value(child, j) for j in range(k + lo, k + hi + 1))
        raise TypeError(f"unsupported node {type(node).__name__}")


def robustness(
    signal: Signal,
    formula: Formula,
    step: int = 0,
    *,
    per_node: bool = False,
) -> RobustnessReport:
    """Robustness of ``formula`` on ``signal`` at ``step``.

    Raises ``InvalidFormulaError`` when the formula does not fit the signal's
    sampling step or dimensions, and ``OutOfRangeError`` or
    ``DerivativeAtBoundaryError`` when evaluation runs off the signal.
    """
    ensure_valid(formula, signal.delta_t, signal.dims)
    if step < 0:
        raise OutOfRangeError(f"step must be non-negative, got {step}")
    evaluator = _Evaluator(signal)
    root = core(formula)
    value = evaluator.value(root, step)
    report = RobustnessReport(value=value, satisfied=value >= 0, step=step)
    if per_node:
        ids = node_ids(formula)
        report.per_node = sorted(
            (
                NodeValue(node_id=ids[node], formula=str(node), step=k, value=v)
                for (node, k), v in evaluator.memo.items()
            ),
            key=lambda entry: (entry.node_id, entry.step),
        )
    logger.debug(f"Robustness of '{formula}' at step {step}: {value}")
    return report


def sat(signal: Signal, formula: Formula, step: int = 0) -> bool:
    """Satisfaction as ``robustness >= 0``.

    Zero robustness counts as satisfied. Under a negation this also accepts
    the boundary case where the inner predicate holds with equality.
    """
    return robustness(signal, formula, step).value >= 0
