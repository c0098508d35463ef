"""YAML problem definitions for ``aware-stl synth`` and ``export-lp``.

Example::

    A: [[1, 1], [0, 1]]
    B: [[0.5], [1]]
    x0: [0, 0]
    delta_t: 1.0
    horizon: 5
    dims: [p, v]
    inputs: [u]
    input_bounds: [[-2, 2]]
    spec: "F[0,5] p >= 3"
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aware_stl.parser import parse
from aware_stl.synthesis.case_study import Variant, case_study_spec
from aware_stl.synthesis.problem import SynthesisProblem
from aware_stl.synthesis.system import LinearSystem


class ProblemFile(BaseModel):
    A: list[list[float]] = Field(description="State matrix, row-major")
    B: list[list[float]] = Field(description="Input matrix, row-major")
    x0: list[float]
    delta_t: float = Field(gt=0)
    horizon: int = Field(ge=0, description="Number of steps H")
    dims: list[str]
    inputs: list[str]
    input_bounds: list[tuple[float, float]] | None = None
    big_m: float | None = Field(None, gt=0)
    spec: str | None = Field(None, description="Formula text")
    spec_file: str | None = Field(None, description="Path to a formula file, relative to this file")
    variant: Variant | None = Field(None, description="Use a built-in case-study formula")
    name: str | None = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _one_formula_source(self) -> "ProblemFile":
        given = [source for source in (self.spec, self.spec_file, self.variant) if source is not None]
        if len(given) != 1:
            raise ValueError("exactly one of spec, spec_file or variant is required")
        if self.input_bounds is not None and len(self.input_bounds) != len(self.inputs):
            raise ValueError(f"input_bounds needs one [lo, hi] pair per input ({len(self.inputs)})")
        return self

    def formula_text(self, base: Path) -> str | None:
        if self.spec is not None:
            return self.spec
        if self.spec_file is not None:
            return (base / self.spec_file).read_text()
        return None

    def to_problem(self, base: Path = Path(".")) -> SynthesisProblem:
        system = LinearSystem(
            np.array(self.A, dtype=float),
            np.array(self.B, dtype=float),
            np.array(self.x0, dtype=float),
            self.delta_t,
            tuple(self.dims),
            tuple(self.inputs),
        )
        text = self.formula_text(base)
        spec = case_study_spec(self.variant) if text is None else parse(text)
        return SynthesisProblem(
            system=system,
            spec=spec,
            horizon=self.horizon,
            input_bounds=self.input_bounds,
            big_m=self.big_m,
            name=self.name or "synthesis",
        )


def load_problem_file(path: str | Path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return ProblemFile.model_validate(data)


def load_problem(path: str | Path) -> SynthesisProblem:
    path = Path(path)
    return load_problem_file(path).to_problem(path.parent)
