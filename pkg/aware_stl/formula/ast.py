"""Immutable syntax tree for STL with integral and derivative predicates.

Nodes are frozen dataclasses, so structurally equal subformulas compare and
hash equal. Source spans are carried for diagnostics but never take part in
equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

STEP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} is after end {self.end}")


def is_step_multiple(value: float, delta_t: float) -> bool:
    ratio = value / delta_t
    return abs(ratio - round(ratio)) <= STEP_TOLERANCE * max(1.0, abs(ratio))


def to_steps(value: float, delta_t: float) -> int:
    """Convert a time bound in seconds to a whole number of sampling steps."""
    if not is_step_multiple(value, delta_t):
        raise ValueError(f"{value} is not a multiple of delta_t={delta_t}")
    return int(round(value / delta_t))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def steps(self, delta_t: float) -> tuple[int, int]:
        return to_steps(self.lo, delta_t), to_steps(self.hi, delta_t)


@dataclass(frozen=True)
class Term:
    """coef * name, or coef * |name| when ``absolute`` is set."""

    name: str
    coef: float = 1.0
    absolute: bool = False


@dataclass(frozen=True)
class LinearExpr:
    terms: tuple[Term, ...] = ()
    constant: float = 0.0

    @classmethod
    def of(cls, name: str, coef: float = 1.0) -> "LinearExpr":
        return cls((Term(name, coef),))

    @classmethod
    def abs_of(cls, name: str, coef: float = 1.0) -> "LinearExpr":
        return cls((Term(name, coef, absolute=True),))

    @property
    def has_abs(self) -> bool:
        return any(term.absolute for term in self.terms)

    def names(self) -> tuple[str, ...]:
        return tuple(term.name for term in self.terms)

    def negated(self) -> "LinearExpr":
        return LinearExpr(
            tuple(Term(t.name, -t.coef, t.absolute) for t in self.terms),
            -self.constant,
        )

    def evaluate(self, values: Mapping[str, float]) -> float:
        total = self.constant
        for term in self.terms:
            value = values[term.name]
            total += term.coef * (abs(value) if term.absolute else value)
        return total


class Side(str, Enum):
    LEFT = "-"
    RIGHT = "+"


@dataclass(frozen=True)
class Formula:
    span: SourceSpan | None = field(default=None, compare=False, repr=False, kw_only=True)

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from aware_stl.parser.printer import to_text

        return to_text(self)


@dataclass(frozen=True)
class Predicate(Formula):
    """expr >= threshold at the evaluation step."""

    expr: LinearExpr
    threshold: float


@dataclass(frozen=True)
class IntegralPredicate(Formula):
    """Integral of expr over [t + a, t + b] compared against threshold."""

    expr: LinearExpr
    bounds: Interval
    threshold: float


@dataclass(frozen=True)
class DerivativePredicate(Formula):
    """One-sided time derivative of expr compared against threshold."""

    expr: LinearExpr
    side: Side
    threshold: float


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class And(Formula):
    operands: tuple[Formula, ...]

    @property
    def children(self) -> tuple[Formula, ...]:
        return self.operands


@dataclass(frozen=True)
class Or(Formula):
    operands: tuple[Formula, ...]

    @property
    def children(self) -> tuple[Formula, ...]:
        return self.operands


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.lhs, self.rhs)

    @property
    def desugared(self) -> "Or":
        return Or((Not(self.lhs), self.rhs), span=self.span)


@dataclass(frozen=True)
class Eventually(Formula):
    interval: Interval
    child: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


@dataclass(frozen=True)
class Globally(Formula):
    interval: Interval
    child: Formula

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.child,)


ATOMS = (Predicate, IntegralPredicate, DerivativePredicate)
TEMPORAL = (Eventually, Globally)


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def walk(formula: Formula) -> Iterator[Formula]:
    """Preorder traversal."""
    yield formula
    for child in formula.children:
        yield from walk(child)


@lru_cache(maxsize=4096)
def core(formula: Formula) -> Formula:
    """Rewrite implications as ``!lhs || rhs``; everything else is rebuilt unchanged."""
    match formula:
        case Implies():
            return Or((Not(core(formula.lhs)), core(formula.rhs)), span=formula.span)
        case Not(child=child):
            return Not(core(child), span=formula.span)
        case And(operands=ops):
            return And(tuple(core(op) for op in ops), span=formula.span)
        case Or(operands=ops):
            return Or(tuple(core(op) for op in ops), span=formula.span)
        case Eventually(interval=interval, child=child):
            return Eventually(interval, core(child), span=formula.span)
        case Globally(interval=interval, child=child):
            return Globally(interval, core(child), span=formula.span)
        case _:
            return formula


def node_ids(formula: Formula) -> dict[Formula, int]:
    """Preorder ids over the desugared tree; equal subformulas share one id."""
    ids: dict[Formula, int] = {}
    for node in walk(core(formula)):
        if node not in ids:
            ids[node] = len(ids)
    return ids


def dimensions(formula: Formula) -> set[str]:
    names: set[str] = set()
    for node in walk(formula):
        if isinstance(node, ATOMS):
            names.update(node.expr.names())
    return names


def count_abs_terms(formula: Formula) -> int:
    return sum(
        sum(1 for term in node.expr.terms if term.absolute)
        for node in walk(core(formula))
        if isinstance(node, ATOMS)
    )


def finite(values: Sequence[float]) -> bool:
    return all(math.isfinite(v) for v in values)
