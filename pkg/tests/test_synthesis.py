from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from aware_stl.config import Config
from aware_stl.exceptions import HorizonTooShortError, InvalidFormulaError, MonitorMismatchError, SynthesisError
from aware_stl.milp import SolveStatus
from aware_stl.monitor import RobustnessReport
from aware_stl.parser import parse
from aware_stl.reporting import write_synthesis_outputs
from aware_stl.synthesis import LinearSystem, SynthesisProblem, build, build_encoded, double_integrator, load_problem, synthesize

PROBLEM_YAML = """
A: [[1, 1], [0, 1]]
B: [[0.5], [1]]
x0: [0, 0]
delta_t: 1.0
horizon: 5
dims: [p, v]
inputs: [u]
input_bounds: [[-2, 2]]
spec: "F[0,5] p >= 3"
name: reach
"""


def cart() -> LinearSystem:
    return LinearSystem(np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[0.5], [1.0]]), np.zeros(2), 1.0, ("p", "v"), ("u",))


@pytest.fixture
def problem_file(tmp_path: Path) -> Path:
    path = tmp_path / "reach.yaml"
    path.write_text(PROBLEM_YAML)
    return path


@pytest.fixture
def reach() -> SynthesisProblem:
    return SynthesisProblem(cart(), parse("F[0,5] p >= 3"), horizon=5, input_bounds=[(-2.0, 2.0)], name="reach")


def test_load_problem(problem_file: Path) -> None:
    problem = load_problem(problem_file)
    assert problem.name == "reach"
    assert problem.horizon == 5
    assert problem.system.dims == ("p", "v")
    assert problem.required_steps() == 5


def test_spec_file_is_relative_to_the_problem(tmp_path: Path) -> None:
    (tmp_path / "reach.stl").write_text("F[0,5] p >= 3\n")
    path = tmp_path / "problem.yaml"
    path.write_text(PROBLEM_YAML.replace('spec: "F[0,5] p >= 3"', "spec_file: reach.stl"))
    assert load_problem(path).required_steps() == 5


@pytest.mark.parametrize(
    "edit",
    [
        lambda text: text.replace('spec: "F[0,5] p >= 3"', ""),
        lambda text: text + "variant: full\n",
        lambda text: text.replace("input_bounds: [[-2, 2]]", "input_bounds: [[-2, 2], [-1, 1]]"),
        lambda text: text.replace("delta_t: 1.0", "delta_t: 0"),
        lambda text: text + "colour: blue\n",
    ],
)
def test_problem_file_validation(tmp_path: Path, edit) -> None:
    path = tmp_path / "bad.yaml"
    path.write_text(edit(PROBLEM_YAML))
    with pytest.raises(ValidationError):
        load_problem(path)


def test_reach_is_solved_by_one_early_push(reach: SynthesisProblem) -> None:
    result = synthesize(reach)
    assert result.status == SolveStatus.OPTIMAL
    # the first input moves p by 4.5 per unit by step 5, the best leverage available
    assert result.cost == pytest.approx(3.0 / 4.5, abs=1e-5)
    assert result.inputs[0, 0] == pytest.approx(3.0 / 4.5, abs=1e-5)
    assert result.states.shape == (6, 2)
    assert result.inputs.shape == (5, 1)
    assert result.robustness.value >= -1e-6
    assert result.dynamics_residual < 1e-6
    assert result.split_residual < 1e-9


def test_trajectory_matches_simulation(reach: SynthesisProblem) -> None:
    result = synthesize(reach)
    np.testing.assert_allclose(result.states, reach.system.simulate(result.inputs), atol=1e-6)


def test_horizon_too_short(reach: SynthesisProblem) -> None:
    with pytest.raises(HorizonTooShortError, match="shorter than the 5 steps"):
        build(replace(reach, horizon=4))


def test_unknown_dimension_is_rejected(reach: SynthesisProblem) -> None:
    with pytest.raises(InvalidFormulaError):
        build(replace(reach, spec=parse("F[0,2] q >= 1")))


def test_weak_inputs_are_infeasible(reach: SynthesisProblem) -> None:
    # reachable p stays below 0.1 * (4.5 + 3.5 + 2.5 + 1.5 + 0.5) = 1.25
    result = synthesize(replace(reach, input_bounds=[(-0.1, 0.1)]))
    assert result.status == SolveStatus.INFEASIBLE
    assert not result.has_trajectory
    assert result.cost is None
    assert result.summary().status == "infeasible"


def test_model_layout(reach: SynthesisProblem) -> None:
    encoded = build_encoded(reach)
    model = encoded.model
    for name in ("x_p_0", "x_v_5", "u_u_0", "upos_u_4", "uneg_u_4"):
        assert model.has_var(name)
    assert not model.has_var("u_u_5")
    rows = {row.name for row in model.constraints}
    assert {"init_p", "init_v", "split_u_0", "dyn_p_4", "dyn_v_4", "spec"} <= rows
    assert encoded.root.lo == encoded.root.hi == 1.0
    assert {var.name for var in model.objective} == {f"u{side}_u_{k}" for side in ("pos", "neg") for k in range(5)}


def test_state_bounds_follow_input_box(reach: SynthesisProblem) -> None:
    model = build(reach)
    assert model.var_by_name("x_v_1").hi == pytest.approx(2.0)
    assert model.var_by_name("x_p_2").lo == pytest.approx(-4.0)


def test_default_input_bound_comes_from_config(reach: SynthesisProblem) -> None:
    config = Config()
    model = build(replace(reach, input_bounds=None), config)
    assert model.var_by_name("u_u_0").hi == config.synthesis.input_bound


def test_export_path(reach: SynthesisProblem, tmp_path: Path) -> None:
    target = tmp_path / "reach.lp"
    synthesize(reach, export_path=target)
    text = target.read_text()
    lines = text.splitlines()
    assert lines[0] == "\\ reach"
    assert lines[1] == "\\ x_<dim>_<k>: state <dim> at step k"
    assert "\\ node 0: F[0,5] p >= 3" in lines
    assert " spec: + 1 " in text
    # the root stays fixed on re-import
    assert f" {build_encoded(reach).root.name} = 1" in lines


def test_monitor_mismatch_is_raised(reach: SynthesisProblem, mocker) -> None:
    mocker.patch(
        "aware_stl.synthesis.problem.robustness",
        return_value=RobustnessReport(value=-0.5, satisfied=False),
    )
    with pytest.raises(MonitorMismatchError, match="robustness -0.5"):
        synthesize(reach)


def test_outputs(reach: SynthesisProblem, tmp_path: Path) -> None:
    result = synthesize(reach)
    written = write_synthesis_outputs(result, tmp_path / "out")
    assert [path.name for path in written] == ["trajectory.csv", "summary.json"]
    lines = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,p,v,u"
    assert len(lines) == 7
    assert lines[-1].startswith("5,") and lines[-1].endswith(",")
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["status"] == "optimal"
    assert summary["horizon"] == 5
    assert summary["cost"] == pytest.approx(3.0 / 4.5, abs=1e-5)


class TestLinearSystem:
    def test_simulate(self) -> None:
        states = cart().simulate(np.array([[1.0], [0.0], [-1.0]]))
        np.testing.assert_allclose(states, [[0, 0], [0.5, 1], [1.5, 1], [2.0, 0]])

    def test_residual(self) -> None:
        system = cart()
        inputs = np.array([[1.0], [2.0]])
        states = system.simulate(inputs)
        assert system.residual(states, inputs) == 0.0
        states[2, 0] += 0.25
        assert system.residual(states, inputs) == pytest.approx(0.25)

    def test_state_bounds(self) -> None:
        lo, hi = cart().state_bounds(2, np.array([-1.0]), np.array([2.0]))
        np.testing.assert_allclose(hi, [[0, 0], [1, 2], [4, 4]])
        np.testing.assert_allclose(lo, [[0, 0], [-0.5, -1], [-2, -2]])

    def test_unbounded_inputs_give_infinite_boxes(self) -> None:
        lo, hi = cart().state_bounds(2, np.array([-np.inf]), np.array([np.inf]))
        assert np.isinf(lo[1:]).all() and np.isinf(hi[1:]).all()
        assert not np.isnan(lo).any()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"A": np.eye(3)},
            {"B": np.ones((2, 2))},
            {"x0": np.zeros(3)},
            {"delta_t": 0.0},
            {"inputs": ("p",)},
        ],
    )
    def test_rejects_inconsistent_shapes(self, kwargs) -> None:
        base = {"A": np.eye(2), "B": np.ones((2, 1)), "x0": np.zeros(2), "delta_t": 1.0, "dims": ("p", "v"), "inputs": ("u",)}
        with pytest.raises(SynthesisError):
            LinearSystem(**(base | kwargs))

    def test_double_integrator(self) -> None:
        system = double_integrator(0.5, (1.0, 0.0, 2.0, 0.0))
        states = system.simulate(np.array([[1.0, -2.0]]))
        np.testing.assert_allclose(states[1], [1.125, 0.5, 1.75, -1.0])
        with pytest.raises(SynthesisError):
            double_integrator(0.0)


def test_one_step_integrator() -> None:
    system = LinearSystem(np.array([[1.0]]), np.array([[1.0]]), np.zeros(1), 1.0, ("x",), ("u",))
    result = synthesize(SynthesisProblem(system, parse("F[0,1] x >= 1"), horizon=1))
    assert result.status == SolveStatus.OPTIMAL
    assert result.inputs[0, 0] == pytest.approx(1.0, abs=1e-6)
    assert result.cost == pytest.approx(1.0, abs=1e-6)
    assert result.robustness.value == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize(
    ("delta_t", "entry", "expected"),
    [
        (1.0, ("A", 0, 1), 1.0),
        (1.0, ("B", 0, 0), 0.5),
        (0.5, ("B", 0, 0), 0.125),
        (2.0, ("A", 0, 1), 2.0),
    ],
)
def test_double_integrator_entries(delta_t: float, entry: tuple[str, int, int], expected: float) -> None:
    name, row, col = entry
    assert getattr(double_integrator(delta_t), name)[row, col] == expected
