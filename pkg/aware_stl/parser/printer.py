"""Canonical text for formulas; ``parse(to_text(f)) == f``."""

from __future__ import annotations

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
    Term,
)

BINARY = (And, Or, Implies)


def format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def format_interval(interval: Interval) -> str:
    return f"[{format_number(interval.lo)},{format_number(interval.hi)}]"


def _factor(term: Term) -> str:
    return f"abs({term.name})" if term.absolute else term.name


def _scaled(term: Term, magnitude: float) -> str:
    if magnitude == 1.0:
        return _factor(term)
    return f"{format_number(magnitude)}*{_factor(term)}"


def format_expr(expr: LinearExpr) -> str:
    parts: list[str] = []
    for term in expr.terms:
        negative = term.coef < 0
        body = _scaled(term, abs(term.coef))
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    if expr.constant != 0 or not parts:
        magnitude = format_number(abs(expr.constant))
        if not parts:
            parts.append(format_number(expr.constant))
        else:
            parts.append(f"- {magnitude}" if expr.constant < 0 else f"+ {magnitude}")
    return " ".join(parts)


def _wrapped(child: Formula) -> str:
    text = to_text(child)
    return f"({text})" if isinstance(child, BINARY) else text


def to_text(formula: Formula) -> str:
    match formula:
        case Predicate(expr=expr, threshold=c):
            return f"{format_expr(expr)} >= {format_number(c)}"
        case IntegralPredicate(expr=expr, bounds=bounds, threshold=c):
            return f"I{format_interval(bounds)}({format_expr(expr)}) >= {format_number(c)}"
        case DerivativePredicate(expr=expr, side=side, threshold=c):
            return f"D{side.value}({format_expr(expr)}) >= {format_number(c)}"
        case Not(child=child):
            return f"!{_wrapped(child)}"
        case And(operands=ops):
            return " && ".join(_wrapped(op) for op in ops)
        case Or(operands=ops):
            return " || ".join(_wrapped(op) for op in ops)
        case Implies(lhs=lhs, rhs=rhs):
            return f"{_wrapped(lhs)} => {_wrapped(rhs)}"
        case Globally(interval=interval, child=child):
            return f"G{format_interval(interval)} {_wrapped(child)}"
        case Eventually(interval=interval, child=child):
            return f"F{format_interval(interval)} {_wrapped(child)}"
    raise TypeError(f"cannot print {type(formula).__name__}")
