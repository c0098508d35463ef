"""Text and CSV renderings of monitor and synthesis results."""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Mapping

import numpy as np

from aware_stl.monitor import RobustnessReport
from aware_stl.synthesis.case_study import REFERENCE_COSTS, Variant, accelerations, agrees_with_reference, velocities
from aware_stl.synthesis.problem import SynthesisResult

logger = logging.getLogger(__name__)


def _num(value: float) -> str:
    return format(float(value), ".17g")


def format_robustness(report: RobustnessReport) -> str:
    verdict = "SATISFIED" if report.satisfied else "VIOLATED"
    return f"robustness {report.value:.6f}, {verdict}"


def format_per_node(report: RobustnessReport) -> str:
    if not report.per_node:
        return ""
    width = max(len(entry.formula) for entry in report.per_node)
    width = min(max(width, 7), 60)
    lines = [f"{'node':>4}  {'step':>4}  {'value':>12}  formula"]
    for entry in report.per_node:
        text = entry.formula if len(entry.formula) <= width else entry.formula[: width - 3] + "..."
        lines.append(f"{entry.node_id:>4}  {entry.step:>4}  {entry.value:>12.6f}  {text}")
    return "\n".join(lines)


def write_trajectory(result: SynthesisResult, path: Path) -> None:
    """t, states, inputs; the final row has no input."""
    system = result.problem.system
    states = result.states
    inputs = result.inputs
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", *system.dims, *system.inputs])
        for k, row in enumerate(states):
            u = [_num(v) for v in inputs[k]] if k < len(inputs) else [""] * system.m
            writer.writerow([_num(k * system.delta_t), *(_num(v) for v in row), *u])


def _write_series(path: Path, header: list[str], times: np.ndarray, values: np.ndarray) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for t, row in zip(times, values):
            writer.writerow([_num(t), *(_num(v) for v in row)])


def write_synthesis_outputs(result: SynthesisResult, out_dir: Path, *, motion: bool = False) -> list[Path]:
    """Write trajectory.csv and summary.json, plus velocity/acceleration CSVs when ``motion``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if result.has_trajectory:
        trajectory = out_dir / "trajectory.csv"
        write_trajectory(result, trajectory)
        written.append(trajectory)
        if motion:
            dt = result.problem.system.delta_t
            v = velocities(result)
            a = accelerations(result)
            velocity = out_dir / "velocity.csv"
            acceleration = out_dir / "acceleration.csv"
            _write_series(velocity, ["t", "vx", "vy"], np.arange(len(v)) * dt, v)
            _write_series(acceleration, ["t", "ax", "ay"], np.arange(len(a)) * dt, a)
            written += [velocity, acceleration]
    summary = out_dir / "summary.json"
    summary.write_text(json.dumps(result.summary().model_dump(mode="json"), indent=2) + "\n")
    written.append(summary)
    logger.info(f"Wrote {len(written)} files to {out_dir}")
    return written


def comparison_table(results: Mapping[Variant, SynthesisResult]) -> str:
    """Cost and time per variant next to the reference cost."""
    lines = [
        f"{'variant':<8} {'status':<11} {'cost':>10} {'reference':>10} {'within 5%':>9} {'time [s]':>9} {'nodes':>8}",
    ]
    for variant, result in results.items():
        cost = "-" if result.cost is None else f"{result.cost:.4f}"
        agree = "yes" if agrees_with_reference(variant, result.cost) else "no"
        lines.append(
            f"{variant.value:<8} {result.status.value:<11} {cost:>10} {REFERENCE_COSTS[variant]:>10.4f} "
            f"{agree:>9} {result.stats.wall_time:>9.2f} {result.stats.nodes:>8}"
        )
    return "\n".join(lines) + "\n"
