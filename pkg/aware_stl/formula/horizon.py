from __future__ import annotations

from aware_stl.formula.ast import (
    And,
    DerivativePredicate,
    Formula,
    Implies,
    IntegralPredicate,
    Not,
    Or,
    Predicate,
    Side,
    TEMPORAL,
)


def horizon(formula: Formula, delta_t: float | None = None) -> float:
    """Seconds of signal needed to decide ``formula``.

    Standard recursion: predicates need nothing, Boolean nodes take the max
    of their children, and a temporal operator adds its upper bound. An
    integral window contributes max(|a|, b, b - a) on its own and
    max(t2, t2 + b) directly under G/F. A right derivative looks one sample
    ahead, so it needs ``delta_t``; a left derivative looks back and adds nothing.
    """
    match formula:
        case Predicate():
            return 0.0
        case IntegralPredicate(bounds=bounds):
            return max(abs(bounds.lo), bounds.hi, bounds.hi - bounds.lo)
        case DerivativePredicate(side=side):
            if side == Side.LEFT:
                return 0.0
            if delta_t is None:
                raise ValueError("delta_t is required for the horizon of a right derivative")
            return float(delta_t)
        case Not(child=child):
            return horizon(child, delta_t)
        case And(operands=ops) | Or(operands=ops):
            return max(horizon(op, delta_t) for op in ops)
        case Implies(lhs=lhs, rhs=rhs):
            return max(horizon(lhs, delta_t), horizon(rhs, delta_t))
        case _ if isinstance(formula, TEMPORAL):
            t2 = formula.interval.hi
            if isinstance(formula.child, IntegralPredicate):
                return max(t2, t2 + formula.child.bounds.hi)
            return t2 + horizon(formula.child, delta_t)
    raise TypeError(f"unsupported node {type(formula).__name__}")
