"""Well-formedness checks against a sampling step."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from aware_stl.exceptions import InvalidFormulaError
from aware_stl.formula.ast import (
    ATOMS,
    And,
    DerivativePredicate,
    Formula,
    Implies,
    IntegralPredicate,
    Interval,
    LinearExpr,
    Not,
    Or,
    SourceSpan,
    TEMPORAL,
    is_step_multiple,
)


class IssueKind(str, Enum):
    NON_DIVISIBLE_BOUND = "non_divisible_bound"
    NEGATIVE_GLOBAL_TIME = "negative_global_time"
    EMPTY_INTERVAL = "empty_interval"
    MALFORMED_EXPR = "malformed_expr"
    UNKNOWN_DIMENSION = "unknown_dimension"


@dataclass(frozen=True)
class ValidationIssue:
    kind: IssueKind
    message: str
    span: SourceSpan | None = None


def validate(
    formula: Formula,
    delta_t: float,
    dims: Iterable[str] | None = None,
) -> list[ValidationIssue]:
    """Collect every problem with ``formula`` sampled at ``delta_t``.

    An empty list means the formula is valid. When ``dims`` is given, every
    identifier must name one of them.
    """
    if not (delta_t > 0 and math.isfinite(delta_t)):
        return [ValidationIssue(IssueKind.MALFORMED_EXPR, f"delta_t must be positive, got {delta_t}")]
    known = set(dims) if dims is not None else None
    issues: list[ValidationIssue] = []
    _check(formula, 0.0, delta_t, known, issues)
    return issues


def ensure_valid(formula: Formula, delta_t: float, dims: Iterable[str] | None = None) -> None:
    issues = validate(formula, delta_t, dims)
    if issues:
        raise InvalidFormulaError(issues)


def _check(
    node: Formula,
    earliest: float,
    delta_t: float,
    known: set[str] | None,
    issues: list[ValidationIssue],
) -> None:
    if isinstance(node, ATOMS):
        _check_expr(node.expr, node, known, issues)
        if isinstance(node, IntegralPredicate):
            _check_interval(node.bounds, node, delta_t, issues, temporal=False)
            if earliest + node.bounds.lo < 0:
                issues.append(
                    ValidationIssue(
                        IssueKind.NEGATIVE_GLOBAL_TIME,
                        f"integral window starts at {earliest} + ({node.bounds.lo}) < 0",
                        node.span,
                    )
                )
        return
    if isinstance(node, (And, Or)) and len(node.operands) < 2:
        issues.append(
            ValidationIssue(
                IssueKind.MALFORMED_EXPR,
                f"{type(node).__name__} needs at least two operands",
                node.span,
            )
        )
    if isinstance(node, TEMPORAL):
        _check_interval(node.interval, node, delta_t, issues, temporal=True)
        earliest = earliest + node.interval.lo
    for child in node.children:
        _check(child, earliest, delta_t, known, issues)
    if not isinstance(node, (Not, And, Or, Implies, *TEMPORAL)):
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, f"unknown node {type(node).__name__}", node.span))


def _check_interval(
    interval: Interval,
    node: Formula,
    delta_t: float,
    issues: list[ValidationIssue],
    *,
    temporal: bool,
) -> None:
    lo, hi = interval.lo, interval.hi
    if not (math.isfinite(lo) and math.isfinite(hi)):
        issues.append(ValidationIssue(IssueKind.EMPTY_INTERVAL, f"unbounded interval [{lo},{hi}]", node.span))
        return
    if temporal and (hi < lo or lo < 0):
        issues.append(
            ValidationIssue(IssueKind.EMPTY_INTERVAL, f"temporal interval [{lo},{hi}] needs 0 <= lo <= hi", node.span)
        )
    if not temporal and hi <= lo:
        issues.append(ValidationIssue(IssueKind.EMPTY_INTERVAL, f"integral bounds [{lo},{hi}] need lo < hi", node.span))
    for bound in (lo, hi):
        if not is_step_multiple(bound, delta_t):
            issues.append(
                ValidationIssue(
                    IssueKind.NON_DIVISIBLE_BOUND,
                    f"bound {bound} is not a multiple of delta_t={delta_t}",
                    node.span,
                )
            )


def _check_expr(
    expr: LinearExpr,
    node: Formula,
    known: set[str] | None,
    issues: list[ValidationIssue],
) -> None:
    names = expr.names()
    if not names:
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, "expression has no signal terms", node.span))
    if any(not name for name in names):
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, "empty dimension name", node.span))
    if len(set(names)) != len(names):
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, f"repeated dimension in {list(names)}", node.span))
    values = [expr.constant, *(term.coef for term in expr.terms)]
    if isinstance(node, ATOMS):
        values.append(node.threshold)
    if not all(math.isfinite(v) for v in values):
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, "non-finite coefficient or threshold", node.span))
    if known is not None:
        for name in names:
            if name and name not in known:
                issues.append(
                    ValidationIssue(IssueKind.UNKNOWN_DIMENSION, f"unknown dimension '{name}'", node.span)
                )
    if isinstance(node, DerivativePredicate) and node.side not in ("+", "-"):
        issues.append(ValidationIssue(IssueKind.MALFORMED_EXPR, f"bad derivative side {node.side!r}", node.span))
