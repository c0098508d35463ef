"""Planar double-integrator mission with three rectangular regions.

Visit A and stay 3 s within the first 17 s; visit B, stay 6 s and travel at
least 2 m along each axis while there within the first 14 s; move gently
(|acceleration| <= 0.25) inside A or B; never accelerate harder than 0.5;
cross C only while moving at |vx| >= 1. Variants drop the integral terms,
the region derivative limits, or both.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from aware_stl.formula.ast import Formula
from aware_stl.parser import parse
from aware_stl.synthesis.problem import SynthesisProblem, SynthesisResult
from aware_stl.synthesis.system import double_integrator

HORIZON = 20
DELTA_T = 1.0
INITIAL_STATE = (0.5, 0.0, 0.5, 0.0)
AGREEMENT = 0.05


@dataclass(frozen=True)
class Region:
    x: tuple[float, float]
    y: tuple[float, float]

    def text(self) -> str:
        return f"x >= {self.x[0]:g} && x <= {self.x[1]:g} && y >= {self.y[0]:g} && y <= {self.y[1]:g}"

    def contains(self, px: float, py: float, tol: float = 1e-9) -> bool:
        return self.x[0] - tol <= px <= self.x[1] + tol and self.y[0] - tol <= py <= self.y[1] + tol


REGION_A = Region((1.5, 2.0), (4.75, 5.25))
REGION_B = Region((4.0, 5.0), (1.0, 3.0))
REGION_C = Region((2.0, 4.0), (1.0, 5.0))


class Variant(str, Enum):
    FULL = "full"
    NO_INT = "no_int"
    NO_DER = "no_der"
    NONE = "none"


# reference optimal costs for each variant
REFERENCE_COSTS = {
    Variant.FULL: 6.5363,
    Variant.NO_DER: 4.8253,
    Variant.NO_INT: 4.0749,
    Variant.NONE: 3.9930,
}

DEFINITIONS = f"""
let inA = {REGION_A.text()};
let inB = {REGION_B.text()};
let inC = {REGION_C.text()};
let travelB = I[0,6](abs(vx)) >= 2 && I[0,6](abs(vy)) >= 2;
let gentle = D-(vx) <= 0.25 && D-(vx) >= -0.25 && D-(vy) <= 0.25 && D-(vy) >= -0.25;
let limited = D+(vx) <= 0.5 && D+(vx) >= -0.5 && D+(vy) <= 0.5 && D+(vy) >= -0.5;
"""

_VISIT_B = {
    True: "F[0,14] (G[0,6] inB && travelB)",
    False: "F[0,14] G[0,6] inB",
}
_GENTLE = "G[1,20] ((inA || inB) => gentle)"
_ALWAYS = "G[0,19] limited && G[0,20] (inC => abs(vx) >= 1)"


def case_study_text(variant: Variant | str = Variant.FULL) -> str:
    variant = Variant(variant)
    with_integral = variant in (Variant.FULL, Variant.NO_DER)
    with_derivative = variant in (Variant.FULL, Variant.NO_INT)
    parts = ["F[0,17] G[0,3] inA", _VISIT_B[with_integral]]
    if with_derivative:
        parts.append(_GENTLE)
    parts.append(_ALWAYS)
    return DEFINITIONS + " && ".join(parts)


def case_study_spec(variant: Variant | str = Variant.FULL) -> Formula:
    return parse(case_study_text(variant))


def region_a() -> Formula:
    return parse(REGION_A.text())


def region_b() -> Formula:
    return parse(REGION_B.text())


def region_c() -> Formula:
    return parse(REGION_C.text())


def case_study_problem(
    variant: Variant | str = Variant.FULL,
    *,
    delta_t: float = DELTA_T,
    horizon: int = HORIZON,
    input_bound: float | None = None,
    big_m: float | None = None,
) -> SynthesisProblem:
    variant = Variant(variant)
    bounds = None if input_bound is None else [(-input_bound, input_bound)] * 2
    return SynthesisProblem(
        system=double_integrator(delta_t, INITIAL_STATE),
        spec=case_study_spec(variant),
        horizon=horizon,
        input_bounds=bounds,
        big_m=big_m,
        name=f"case_study_{variant.value}",
    )


def velocities(result: SynthesisResult) -> np.ndarray:
    """(H+1, 2) array of (vx, vy)."""
    signal = result.signal()
    return np.column_stack([signal.column("vx"), signal.column("vy")])


def accelerations(result: SynthesisResult) -> np.ndarray:
    """(H, 2) right-difference accelerations (v[k+1] - v[k]) / dt."""
    return np.diff(velocities(result), axis=0) / result.problem.system.delta_t


def agrees_with_reference(variant: Variant | str, cost: float | None) -> bool:
    if cost is None:
        return False
    reference = REFERENCE_COSTS[Variant(variant)]
    return abs(cost - reference) <= AGREEMENT * reference
