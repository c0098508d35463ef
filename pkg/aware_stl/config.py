from __future__ import annotations

from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field

from aware_stl.configs import DEFAULT_CONFIG, get_config_path

Backend = Literal["builtin", "highs"]


class SolverConfig(BaseModel):
    """Branch-and-bound limits and simplex tolerances."""

    backend: Backend = Field("builtin", description="MILP engine: built-in simplex B&B or scipy/HiGHS")
    node_limit: int = Field(200_000, gt=0, description="Maximum branch-and-bound nodes (LP solves)")
    time_limit: float = Field(600.0, gt=0, description="Wall-clock limit in seconds")
    feasibility_tol: float = Field(1e-7, gt=0, description="Relative row feasibility tolerance")
    integrality_tol: float = Field(1e-6, gt=0, description="Distance from 0/1 accepted as integral")
    optimality_gap: float = Field(1e-6, ge=0, description="Absolute gap for proven optimality")
    bland_after: int = Field(1000, gt=0, description="Degenerate pivots before switching to Bland's rule")
    log_every: int = Field(500, gt=0, description="Nodes between debug progress lines")

    model_config = ConfigDict(extra="forbid")


class EncoderConfig(BaseModel):
    big_m: float = Field(1e4, gt=0, description="Default big-M constant")
    tighten: bool = Field(True, description="Shrink big-M per row to the variable bound box when finite")

    model_config = ConfigDict(extra="forbid")


class SynthesisConfig(BaseModel):
    input_bound: float = Field(10.0, gt=0, description="Symmetric input bound used when a problem gives none")
    monitor_tol: float = Field(1e-6, ge=0, description="Robustness slack accepted by the monitor cross-check")

    model_config = ConfigDict(extra="forbid")


class Config(BaseModel):
    solver: SolverConfig = Field(default_factory=SolverConfig)
    encoder: EncoderConfig = Field(default_factory=EncoderConfig)
    synthesis: SynthesisConfig = Field(default_factory=SynthesisConfig)

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def load_from_file_name(cls, file_name: str = DEFAULT_CONFIG) -> "Config":
        return cls.load(get_config_path() / file_name)

    @classmethod
    def load(cls, path: str | Path) -> "Config":
        with open(path, "r", encoding="utf-8") as f:
            config_dict = yaml.safe_load(f) or {}
        return cls.model_validate(config_dict)

    def with_overrides(
        self,
        *,
        big_m: float | None = None,
        node_limit: int | None = None,
        time_limit: float | None = None,
        backend: Backend | None = None,
    ) -> "Config":
        """Return a copy with CLI overrides applied and re-validated."""
        solver = self.solver.model_dump()
        encoder = self.encoder.model_dump()
        if big_m is not None:
            encoder["big_m"] = big_m
        if node_limit is not None:
            solver["node_limit"] = node_limit
        if time_limit is not None:
            solver["time_limit"] = time_limit
        if backend is not None:
            solver["backend"] = backend
        return Config.model_validate(
            {"solver": solver, "encoder": encoder, "synthesis": self.synthesis.model_dump()}
        )
