"""Formula syntax tree, validation and horizons."""

from aware_stl.formula.ast import (
    And,
    DerivativePredicate,
    Eventually,
    Formula,
    Globally,
    Implies,
    IntegralPredicate,
    Interval,
    LinearExpr,
    Not,
    Or,
    Predicate,
    Side,
    SourceSpan,
    Term,
    conj,
    core,
    dimensions,
    disj,
    node_ids,
    to_steps,
    walk,
)
from aware_stl.formula.horizon import horizon
from aware_stl.formula.validate import IssueKind, ValidationIssue, ensure_valid, validate

__all__ = [
    "And",
    "DerivativePredicate",
    "Eventually",
    "Formula",
    "Globally",
    "Implies",
    "IntegralPredicate",
    "Interval",
    "IssueKind",
    "LinearExpr",
    "Not",
    "Or",
    "Predicate",
    "Side",
    "SourceSpan",
    "Term",
    "ValidationIssue",
    "conj",
    "core",
    "dimensions",
    "disj",
    "ensure_valid",
    "horizon",
    "node_ids",
    "to_steps",
    "validate",
    "walk",
]
