"""Big-M encoding of formulas into satisfaction binaries.

``encode(f, ctx, k)`` returns a binary z with z = 1 exactly when f holds at
step k on the trajectory held by the context variables (up to ties at zero
robustness, where both values stay feasible). Atoms get the usual pair of
rows on h = g - c::

    h >= M1 (z - 1)        h <= M2 z

Boolean and temporal nodes combine child binaries with the standard
conjunction and disjunction rows. Results are memoised per (node, step).
"""

from __future__ import annotations

import logging

from aware_stl.encoder.context import Affine, EncodingContext
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
from aware_stl.milp.model import Sense, VarRef

logger = logging.getLogger(__name__)


def encode(formula: Formula, ctx: EncodingContext, step: int = 0) -> VarRef:
    """Satisfaction binary of ``formula`` at ``step``; implications are rewritten first."""
    root = core(formula)
    if not ctx.ids:
        ctx.ids.update(node_ids(formula))
        ctx.model.notes += [f"node {nid}: {node}" for node, nid in ctx.ids.items()]
    before = ctx.model.num_binaries
    z = _encode(root, ctx, step)
    logger.debug(
        f"Encoded '{formula}' at step {step}: {ctx.model.num_binaries - before} new binaries, "
        f"{len(ctx.model.constraints)} rows in total"
    )
    return z


def encode_abs(expr: LinearExpr, ctx: EncodingContext, step: int) -> VarRef:
    """Continuous variable equal to ``expr`` at ``step`` with every |v| resolved exactly."""
    terms, constant = ctx.expr_at(expr, step)
    lo, hi = ctx.affine_bounds((terms, constant))
    index = len(ctx.model.variables)
    value = ctx.model.add_var(f"e_{index}_{step}", lo=lo, hi=hi)
    row = [(value, 1.0)] + [(var, -coef) for var, coef in terms.items()]
    ctx.model.add_constraint(row, Sense.EQ, constant, name=f"expr_{index}_{step}")
    return value


def _encode(node: Formula, ctx: EncodingContext, k: int) -> VarRef:
    key = (node, k)
    if key in ctx.memo:
        return ctx.memo[key]
    z = _build(node, ctx, k)
    ctx.memo[key] = z
    return z


def _build(node: Formula, ctx: EncodingContext, k: int) -> VarRef:
    nid = ctx.node_id(node)
    match node:
        case Predicate(expr=expr, threshold=c):
            single = _single_abs(expr)
            if single is not None:
                tau = (c - expr.constant) / single[1]
                if tau > 0:
                    return _magnitude_at_least(ctx, nid, k, single[0], tau)
            terms, constant = ctx.expr_at(expr, k)
            return _atom(ctx, nid, k, (terms, constant - c))
        case IntegralPredicate(expr=expr, bounds=bounds, threshold=c):
            a, b = bounds.steps(ctx.delta_t)
            terms: dict[VarRef, float] = {}
            constant = -c
            for j in range(k + a, k + b):
                part, offset = ctx.expr_at(expr, j, scale=ctx.delta_t)
                for var, coef in part.items():
                    terms[var] = terms.get(var, 0.0) + coef
                constant += offset
            return _atom(ctx, nid, k, (terms, constant))
        case DerivativePredicate(expr=expr, side=side, threshold=c):
            later, earlier = (k + 1, k) if side == Side.RIGHT else (k, k - 1)
            ahead, _ = ctx.expr_at(expr, later)
            behind, _ = ctx.expr_at(expr, earlier)
            terms = dict(ahead)
            for var, coef in behind.items():
                terms[var] = terms.get(var, 0.0) - coef
            return _atom(ctx, nid, k, (terms, -c * ctx.delta_t))
        case Not(child=child):
            inner = _encode(child, ctx, k)
            z = ctx.model.add_binary(f"z_{nid}_{k}")
            ctx.model.add_constraint([(z, 1.0), (inner, 1.0)], Sense.EQ, 1.0, name=f"not_{nid}_{k}")
            return z
        case And(operands=ops):
            return _conjunction(ctx, nid, k, [_encode(op, ctx, k) for op in ops])
        case Or(operands=ops):
            return _disjunction(ctx, nid, k, [_encode(op, ctx, k) for op in ops])
        case Globally(interval=interval, child=child):
            lo, hi = interval.steps(ctx.delta_t)
            return _conjunction(ctx, nid, k, [_encode(child, ctx, j) for j in range(k + lo, k + hi + 1)])
        case Eventually(interval=interval, child=child):
            lo, hi = interval.steps(ctx.delta_t)
            return _disjunction(ctx, nid, k, [_encode(child, ctx, j) for j in range(k + lo, k + hi + 1)])
    raise TypeError(f"cannot encode {type(node).__name__}")


def _atom(ctx: EncodingContext, nid: int, k: int, h: Affine) -> VarRef:
    terms, constant = h
    lo, hi = ctx.affine_bounds(h)
    label = f"atom {nid} at step {k}"
    m_low = ctx.big_m_for(-lo, label)
    m_high = ctx.big_m_for(hi, label)
    z = ctx.model.add_binary(f"z_{nid}_{k}")
    row = list(terms.items())
    # h >= M1 (z - 1)  and  h <= M2 z
    ctx.model.add_constraint(row + [(z, -m_low)], Sense.GE, -m_low - constant, name=f"p{nid}_{k}_lo")
    ctx.model.add_constraint(row + [(z, -m_high)], Sense.LE, -constant, name=f"p{nid}_{k}_hi")
    return z


def _single_abs(expr: LinearExpr) -> tuple[str, float] | None:
    if len(expr.terms) == 1 and expr.terms[0].absolute and expr.terms[0].coef > 0:
        return expr.terms[0].name, expr.terms[0].coef
    return None


def _magnitude_at_least(ctx: EncodingContext, nid: int, k: int, dim: str, tau: float) -> VarRef:
    """z = 1 iff |v| >= tau (tau > 0), as v >= tau or -v >= tau chosen by one extra binary s."""
    v = ctx.sample(dim, k)
    lo, hi = ctx.bounds(v)
    label = f"atom {nid} at step {k}"
    m_up = ctx.big_m_for(tau - lo, label)
    m_down = ctx.big_m_for(tau + hi, label)
    m_inside_up = ctx.big_m_for(hi - tau, label)
    m_inside_down = ctx.big_m_for(-lo - tau, label)
    z = ctx.model.add_binary(f"z_{nid}_{k}")
    s = ctx.model.add_binary(f"s_{nid}_{k}")
    name = f"p{nid}_{k}"
    # z = 1, s = 0: v >= tau;  z = 1, s = 1: -v >= tau
    ctx.model.add_constraint([(v, 1.0), (z, -m_up), (s, m_up)], Sense.GE, tau - m_up, name=f"{name}_pos")
    ctx.model.add_constraint([(v, -1.0), (z, -m_down), (s, -m_down)], Sense.GE, tau - 2 * m_down, name=f"{name}_neg")
    # z = 0: -tau <= v <= tau
    ctx.model.add_constraint([(v, 1.0), (z, -m_inside_up)], Sense.LE, tau, name=f"{name}_in_hi")
    ctx.model.add_constraint([(v, -1.0), (z, -m_inside_down)], Sense.LE, tau, name=f"{name}_in_lo")
    return z


def _distinct(children: list[VarRef]) -> list[VarRef]:
    return list(dict.fromkeys(children))


def _conjunction(ctx: EncodingContext, nid: int, k: int, children: list[VarRef]) -> VarRef:
    children = _distinct(children)
    if len(children) == 1:
        return children[0]
    z = ctx.model.add_binary(f"z_{nid}_{k}")
    for i, child in enumerate(children):
        ctx.model.add_constraint([(z, 1.0), (child, -1.0)], Sense.LE, 0.0, name=f"and{nid}_{k}_{i}")
    ctx.model.add_constraint(
        [(z, 1.0)] + [(child, -1.0) for child in children],
        Sense.GE,
        1.0 - len(children),
        name=f"and{nid}_{k}",
    )
    return z


def _disjunction(ctx: EncodingContext, nid: int, k: int, children: list[VarRef]) -> VarRef:
    children = _distinct(children)
    if len(children) == 1:
        return children[0]
    z = ctx.model.add_binary(f"z_{nid}_{k}")
    for i, child in enumerate(children):
        ctx.model.add_constraint([(z, 1.0), (child, -1.0)], Sense.GE, 0.0, name=f"or{nid}_{k}_{i}")
    ctx.model.add_constraint(
        [(z, 1.0)] + [(child, -1.0) for child in children],
        Sense.LE,
        0.0,
        name=f"or{nid}_{k}",
    )
    return z
