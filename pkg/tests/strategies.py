"""Hypothesis strategies for formulas, signals and small MILPs.

Signals are integer-valued and thresholds are half-integers, so no atom is
ever exactly at its threshold and Boolean and quantitative semantics agree.
"""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from aware_stl.formula import (
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
    Term,
    horizon,
)
from aware_stl.milp import MilpModel, Sense
from aware_stl.monitor import Signal

DIMS = ("x", "y")

half_integers = st.integers(-6, 5).map(lambda n: n + 0.5)


@st.composite
def linear_exprs(draw, dims=DIMS, allow_abs: bool = True) -> LinearExpr:
    names = draw(st.lists(st.sampled_from(dims), min_size=1, max_size=len(dims), unique=True))
    terms = tuple(
        Term(
            name,
            float(draw(st.sampled_from((-2, -1, 1, 2)))),
            draw(st.booleans()) if allow_abs else False,
        )
        for name in names
    )
    return LinearExpr(terms, float(draw(st.integers(-2, 2))))


@st.composite
def atoms(draw, dims=DIMS, max_window: int = 2) -> Formula:
    kind = draw(st.sampled_from(("predicate", "predicate", "integral", "derivative")))
    expr = draw(linear_exprs(dims))
    threshold = draw(half_integers)
    if kind == "integral":
        lo = draw(st.integers(0, max_window - 1))
        hi = draw(st.integers(lo + 1, max_window))
        return IntegralPredicate(expr, Interval(float(lo), float(hi)), threshold)
    if kind == "derivative":
        return DerivativePredicate(expr, draw(st.sampled_from(list(Side))), threshold)
    return Predicate(expr, threshold)


@st.composite
def intervals(draw, max_hi: int = 2) -> Interval:
    lo = draw(st.integers(0, max_hi))
    hi = draw(st.integers(lo, max_hi))
    return Interval(float(lo), float(hi))


def formulas(dims=DIMS, max_depth: int = 3, max_hi: int = 2) -> st.SearchStrategy[Formula]:
    def extend(children: st.SearchStrategy[Formula]) -> st.SearchStrategy[Formula]:
        pair = st.lists(children, min_size=2, max_size=3)
        return st.one_of(
            children.map(Not),
            pair.map(lambda ops: And(tuple(ops))),
            pair.map(lambda ops: Or(tuple(ops))),
            st.tuples(children, children).map(lambda lr: Implies(*lr)),
            st.tuples(intervals(max_hi), children).map(lambda ic: Globally(*ic)),
            st.tuples(intervals(max_hi), children).map(lambda ic: Eventually(*ic)),
        )

    return st.recursive(atoms(dims, max_window=max_hi), extend, max_leaves=2 ** max_depth)


def depth(formula: Formula) -> int:
    return 1 + max((depth(child) for child in formula.children), default=0)


@st.composite
def signals(draw, steps: int, dims=DIMS, delta_t: float = 1.0) -> Signal:
    values = draw(
        st.lists(
            st.lists(st.integers(-4, 4), min_size=len(dims), max_size=len(dims)),
            min_size=steps,
            max_size=steps,
        )
    )
    return Signal.from_array(delta_t, dims, np.array(values, dtype=float))


def _bounded_formulas(max_depth: int, max_hi: int) -> st.SearchStrategy[Formula]:
    return formulas(max_depth=max_depth, max_hi=max_hi).filter(lambda f: depth(f) <= max_depth + 1)


@st.composite
def formula_and_signal(draw, max_depth: int = 3, max_hi: int = 2) -> tuple[Formula, Signal]:
    """A formula evaluated at step 1 and a signal long enough for it."""
    formula = draw(_bounded_formulas(max_depth, max_hi))
    steps = 2 + int(math.ceil(horizon(formula, 1.0)))
    return formula, draw(signals(steps))


@st.composite
def formula_pair_and_signal(draw, max_depth: int = 2, max_hi: int = 2) -> tuple[Formula, Formula, Signal]:
    first = draw(_bounded_formulas(max_depth, max_hi))
    second = draw(_bounded_formulas(max_depth, max_hi))
    steps = 2 + int(math.ceil(max(horizon(first, 1.0), horizon(second, 1.0))))
    return first, second, draw(signals(steps))


@st.composite
def shifted_window(draw, max_depth: int = 2) -> tuple[Formula, Interval, int, Signal]:
    """A child formula, a window, a shift and a signal covering the shifted window from step 1."""
    child = draw(_bounded_formulas(max_depth, 2))
    window = draw(intervals(max_hi=2))
    shift = draw(st.integers(0, 2))
    steps = 2 + int(math.ceil(window.hi + shift + horizon(child, 1.0)))
    return child, window, shift, draw(signals(steps))


@st.composite
def split_integral(draw) -> tuple[LinearExpr, tuple[int, int, int], tuple[float, float], Signal]:
    """Adjacent step windows [a, b) and [b, c) over one expression."""
    delta_t = draw(st.sampled_from((0.5, 1.0)))
    a = draw(st.integers(0, 2))
    b = draw(st.integers(a + 1, 3))
    c = draw(st.integers(b + 1, 5))
    thresholds = (draw(half_integers), draw(half_integers))
    return draw(linear_exprs()), (a, b, c), thresholds, draw(signals(c + 2, delta_t=delta_t))


@st.composite
def linear_signals(draw, steps: int = 8) -> tuple[float, float, Signal]:
    """x = offset + slope * t sampled at integer or half-integer spacing."""
    delta_t = draw(st.sampled_from((0.5, 1.0)))
    offset = float(draw(st.integers(-3, 3)))
    slope = float(draw(st.integers(-2, 2)))
    x = offset + slope * delta_t * np.arange(steps, dtype=float)
    return delta_t, slope, Signal.from_array(delta_t, ["x"], x.reshape(-1, 1))


@st.composite
def small_milps(draw, max_binaries: int = 6, max_continuous: int = 2) -> MilpModel:
    """Bounded models with integer data; at most ``max_binaries`` binaries."""
    model = MilpModel("random")
    n_bin = draw(st.integers(1, max_binaries))
    n_cont = draw(st.integers(0, max_continuous))
    variables = [model.add_binary(f"b{i}") for i in range(n_bin)]
    for i in range(n_cont):
        lo = draw(st.integers(-3, 1))
        hi = draw(st.integers(lo, 4))
        variables.append(model.add_var(f"x{i}", lo=lo, hi=hi))
    coefficient = st.integers(-3, 3)
    for i in range(draw(st.integers(1, 4))):
        terms = [(var, float(draw(coefficient))) for var in variables]
        sense = draw(st.sampled_from(list(Sense)))
        model.add_constraint(terms, sense, float(draw(st.integers(-4, 4))), name=f"r{i}")
    model.minimize([(var, float(draw(coefficient))) for var in variables])
    return model


@st.composite
def small_lps(draw, max_vars: int = 4) -> MilpModel:
    model = MilpModel("lp")
    n = draw(st.integers(1, max_vars))
    variables = []
    for i in range(n):
        lo = draw(st.integers(-5, 2))
        hi = draw(st.integers(lo, 5))
        variables.append(model.add_var(f"x{i}", lo=lo, hi=hi))
    coefficient = st.integers(-4, 4)
    for i in range(draw(st.integers(0, 4))):
        terms = [(var, float(draw(coefficient))) for var in variables]
        sense = draw(st.sampled_from((Sense.LE, Sense.GE, Sense.LE, Sense.EQ)))
        model.add_constraint(terms, sense, float(draw(st.integers(-6, 6))), name=f"r{i}")
    model.minimize([(var, float(draw(coefficient))) for var in variables])
    return model
