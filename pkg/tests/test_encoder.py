from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings

from aware_stl.config import SolverConfig
from aware_stl.encoder import NAME_LEGEND, EncodingContext, encode, encode_abs
from aware_stl.exceptions import BigMTooSmallError, EncodingError, WindowOverflowError
from aware_stl.formula import Formula, LinearExpr, Not, horizon, node_ids
from aware_stl.milp import MilpModel, Sense, SolveStatus, export_lp, solve_milp
from aware_stl.monitor import Signal, robustness
from aware_stl.parser import parse

from tests.oracles import holds, pinned_feasible
from tests.strategies import DIMS, formula_and_signal


def pinned(values, dims=("x",), delta_t=1.0) -> tuple[EncodingContext, Signal]:
    signal = Signal.from_array(delta_t, dims, np.array(values, dtype=float).reshape(len(values), len(dims)))
    return EncodingContext.pinned(signal), signal


def decide(text: str, values, step: int = 0, dims=("x",)) -> bool:
    ctx, signal = pinned(values, dims)
    root = encode(parse(text), ctx, step)
    return pinned_feasible(ctx, signal, root)


def free_context(horizon: int, lo: float = -10.0, hi: float = 10.0, big_m: float = 1e4, tighten: bool = True):
    model = MilpModel("free")
    table = {("x", k): model.add_var(f"x_x_{k}", lo=lo, hi=hi) for k in range(horizon + 1)}
    return EncodingContext(model, 1.0, horizon, table, big_m=big_m, tighten=tighten)


def test_worked_example_is_feasible() -> None:
    assert decide("F[0,4] I[0,2](x) >= 3", [1, 1, 1, 1, 1, 2, 0.1])
    assert not decide("F[0,4] I[0,2](x) >= 3.5", [1, 1, 1, 1, 1, 2, 0.1])


@pytest.mark.parametrize(
    "text, values, step, expected",
    [
        ("x >= 2", [3], 0, True),
        ("x >= 2", [1], 0, False),
        ("!x >= 2", [1], 0, True),
        ("G[0,2] x >= 0.5", [1, 2, 0], 0, False),
        ("F[0,2] x >= 1.5", [1, 2, 0], 0, True),
        ("D+(x) >= 0.5", [0, 1], 0, True),
        ("D-(x) >= 0.5", [1, 0], 1, False),
        ("abs(x) >= 2", [-3], 0, True),
        ("abs(x) >= 2", [1], 0, False),
        ("!abs(x) >= 2", [-1], 0, True),
        ("I[-2,0](x) >= 3", [1, 2, 0], 2, True),
        ("x >= 0 => abs(x) <= 1", [0.5], 0, True),
        ("x >= 0 => abs(x) <= 1", [2], 0, False),
    ],
)
def test_pinned_decisions(text: str, values, step: int, expected: bool) -> None:
    assert decide(text, values, step) is expected


def test_satisfaction_binaries_are_named_by_node_and_step() -> None:
    ctx, _ = pinned([1, 2, 3])
    root = encode(parse("F[0,2] x >= 2"), ctx)
    assert root.name == "z_0_0"
    assert [ctx.model.has_var(f"z_1_{k}") for k in range(3)] == [True, True, True]
    assert {row.name for row in ctx.model.constraints} >= {"p1_0_lo", "p1_0_hi", "or0_0"}


def test_model_notes_name_the_nodes_and_auxiliaries() -> None:
    ctx, _ = pinned([1, 2, 3])
    encode(parse("F[0,2] x >= 2"), ctx)
    assert set(NAME_LEGEND) <= set(ctx.model.notes)
    assert "node 0: F[0,2] x >= 2" in ctx.model.notes
    assert "node 1: x >= 2" in ctx.model.notes
    assert export_lp(ctx.model).splitlines()[1].startswith("\\ z_<node>_<k>")


def test_encoding_is_memoised() -> None:
    ctx, _ = pinned([1, 2, 3])
    formula = parse("G[0,1] x >= 2 && F[0,1] x >= 2")
    root = encode(formula, ctx)
    count = ctx.model.num_binaries
    assert encode(formula, ctx) == root
    assert ctx.model.num_binaries == count
    # the atom at steps 0 and 1 is shared by both temporal nodes
    assert count == 2 + 2 + 1


def test_duplicate_children_collapse() -> None:
    ctx, _ = pinned([1])
    root = encode(parse("x >= 0 && x >= 0"), ctx)
    assert root.name == "z_1_0"
    assert ctx.model.num_binaries == 1


def test_magnitude_variables_are_shared() -> None:
    ctx = free_context(2)
    encode(parse("abs(x) <= 3 && F[0,0] abs(x) <= 5"), ctx)
    assert list(ctx.abs_memo) == [("x", 0)]
    w = ctx.abs_memo[("x", 0)]
    assert (w.lo, w.hi) == (0.0, 10.0)


def test_single_abs_term_uses_two_binaries_without_a_magnitude_variable() -> None:
    ctx = free_context(0)
    root = encode(parse("abs(x) >= 2"), ctx)
    assert ctx.abs_memo == {}
    assert ctx.model.num_binaries == 2
    assert ctx.model.has_var(root.name.replace("z_", "s_"))


def test_window_overflow() -> None:
    ctx = free_context(3)
    with pytest.raises(WindowOverflowError):
        encode(parse("F[0,4] x >= 0"), ctx)
    with pytest.raises(WindowOverflowError):
        encode(parse("D-(x) >= 0"), ctx, 0)


def test_big_m_must_cover_the_bound_box() -> None:
    ctx = free_context(1, lo=-1e5, hi=1e5)
    with pytest.raises(BigMTooSmallError):
        encode(parse("x >= 0"), ctx)


def test_unbounded_samples_fall_back_to_big_m() -> None:
    ctx = free_context(0, lo=-math.inf, hi=math.inf, big_m=500.0)
    encode(parse("x >= 1"), ctx)
    coefficients = {row.name: dict((var.name, coef) for var, coef in row.terms) for row in ctx.model.constraints}
    assert coefficients["p0_0_lo"]["z_0_0"] == -500.0
    assert coefficients["p0_0_hi"]["z_0_0"] == -500.0


def test_tightening_uses_the_bound_box() -> None:
    tight = free_context(0, lo=-4.0, hi=6.0)
    encode(parse("x >= 1"), tight)
    loose = free_context(0, lo=-4.0, hi=6.0, tighten=False)
    encode(parse("x >= 1"), loose)

    def z_coef(ctx, name):
        (row,) = [row for row in ctx.model.constraints if row.name == name]
        return dict((var.name, coef) for var, coef in row.terms)["z_0_0"]

    # h = x - 1 lies in [-5, 5]
    assert z_coef(tight, "p0_0_lo") == -5.0
    assert z_coef(tight, "p0_0_hi") == -5.0
    assert z_coef(loose, "p0_0_lo") == -1e4


def test_context_rejects_non_positive_big_m() -> None:
    with pytest.raises(EncodingError):
        free_context(0, big_m=0.0)


def test_encode_abs_matches_the_expression() -> None:
    ctx, signal = pinned([[-2.0, 3.0]], dims=("x", "y"))
    expr = LinearExpr(LinearExpr.abs_of("x", 2.0).terms + LinearExpr.of("y", -1.0).terms, 0.5)
    e = encode_abs(expr, ctx, 0)
    ctx.model.minimize([(e, 1.0)])
    result = solve_milp(ctx.model, SolverConfig())
    assert result.status == SolveStatus.OPTIMAL
    assert result.value(e) == pytest.approx(2 * 2.0 - 3.0 + 0.5)


def test_synthesis_style_search_finds_a_satisfying_signal() -> None:
    ctx = free_context(3, lo=0.0, hi=5.0)
    root = encode(parse("F[0,3] x >= 4 && G[0,3] x <= 4.5"), ctx)
    ctx.model.add_constraint([(root, 1.0)], Sense.EQ, 1.0)
    ctx.model.minimize([(ctx.sample("x", k), 1.0) for k in range(4)])
    result = solve_milp(ctx.model, SolverConfig())
    assert result.status == SolveStatus.OPTIMAL
    assert result.objective == pytest.approx(4.0)
    samples = [[result.value(ctx.sample("x", k))] for k in range(4)]
    signal = Signal.from_array(1.0, ["x"], samples)
    assert robustness(signal, parse("F[0,3] x >= 4 && G[0,3] x <= 4.5")).value >= -1e-6


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(formula_and_signal(max_depth=2, max_hi=1))
def test_encoding_agrees_with_the_monitor(case) -> None:
    formula, signal = case
    ctx = EncodingContext.pinned(signal)
    root = encode(formula, ctx, 1)
    assume(ctx.model.num_binaries <= 15)
    assert pinned_feasible(ctx, signal, root) == holds(signal, formula, 1)
    assert pinned_feasible(ctx, signal, root) == robustness(signal, formula, 1).satisfied


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(formula_and_signal(max_depth=2, max_hi=1))
def test_branch_and_bound_decides_pinned_formulas(case) -> None:
    formula, signal = case
    ctx = EncodingContext.pinned(signal)
    root = encode(formula, ctx, 1)
    ctx.model.set_bounds(root, 1.0, 1.0)
    result = solve_milp(ctx.model, SolverConfig())
    expected = SolveStatus.OPTIMAL if holds(signal, formula, 1) else SolveStatus.INFEASIBLE
    assert result.status == expected


def free_signal_context(steps: int, dims=DIMS, lo: float = -4.0, hi: float = 4.0) -> EncodingContext:
    model = MilpModel("free")
    table = {(dim, k): model.add_var(f"x_{dim}_{k}", lo=lo, hi=hi) for k in range(steps) for dim in dims}
    return EncodingContext(model, 1.0, steps - 1, table)


def cheapest_satisfying_signal(formula: Formula, steps: int):
    ctx = free_signal_context(steps)
    root = encode(formula, ctx, 1)
    ctx.model.set_bounds(root, 1.0, 1.0)
    ctx.model.minimize([(var, 1.0 + i % 3) for i, var in enumerate(ctx.signal.values())])
    return solve_milp(ctx.model, SolverConfig())


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(formula_and_signal(max_depth=2, max_hi=1))
def test_double_negation_changes_nothing(case) -> None:
    formula, signal = case
    twice = Not(Not(formula))
    assert robustness(signal, twice, 1).value == robustness(signal, formula, 1).value

    plain_ctx = EncodingContext.pinned(signal)
    plain = encode(formula, plain_ctx, 1)
    twice_ctx = EncodingContext.pinned(signal)
    doubled = encode(twice, twice_ctx, 1)
    assert twice_ctx.model.num_binaries == plain_ctx.model.num_binaries + 2
    assume(twice_ctx.model.num_binaries <= 15)
    assert pinned_feasible(twice_ctx, signal, doubled) == pinned_feasible(plain_ctx, signal, plain)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(formula_and_signal(max_depth=2, max_hi=1))
def test_double_negation_keeps_the_optimum(case) -> None:
    formula, signal = case
    plain = cheapest_satisfying_signal(formula, signal.length)
    twice = cheapest_satisfying_signal(Not(Not(formula)), signal.length)
    assert twice.status == plain.status
    if plain.status == SolveStatus.OPTIMAL:
        assert twice.objective == pytest.approx(plain.objective, abs=1e-5)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(formula_and_signal(max_depth=3, max_hi=2))
def test_binary_count_is_bounded_by_size_and_horizon(case) -> None:
    formula, signal = case
    ctx = EncodingContext.pinned(signal)
    encode(formula, ctx, 1)
    nodes = len(node_ids(formula))
    steps = signal.length
    assert ctx.model.num_binaries <= 2 * len(ctx.memo) + len(ctx.abs_memo)
    assert len(ctx.memo) <= nodes * steps
    assert len(ctx.abs_memo) <= len(signal.dims) * steps
    assert ctx.model.num_binaries <= (2 * nodes + len(signal.dims)) * (2 + math.ceil(horizon(formula, 1.0)))
