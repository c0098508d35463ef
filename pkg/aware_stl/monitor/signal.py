from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from aware_stl.exceptions import SignalFormatError

logger = logging.getLogger(__name__)

SPACING_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled trajectory: one row per step, one column per dimension."""

    delta_t: float
    dims: tuple[str, ...]
    samples: np.ndarray

    def __post_init__(self) -> None:
        if not (self.delta_t > 0 and math.isfinite(self.delta_t)):
            raise SignalFormatError(f"delta_t must be positive, got {self.delta_t}")
        if len(set(self.dims)) != len(self.dims):
            raise SignalFormatError(f"duplicate dimension names in {self.dims}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1 and len(self.dims) == 1:
            samples = samples.reshape(-1, 1)
        if samples.ndim != 2 or samples.shape[1] != len(self.dims):
            raise SignalFormatError(
                f"samples must be a (steps, {len(self.dims)}) matrix, got shape {samples.shape}"
            )
        if samples.shape[0] < 1:
            raise SignalFormatError("signal needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise SignalFormatError("signal contains non-finite samples")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dims", tuple(self.dims))

    @classmethod
    def from_array(cls, delta_t: float, dims: Sequence[str], samples) -> "Signal":
        return cls(delta_t, tuple(dims), np.asarray(samples, dtype=float))

    @property
    def length(self) -> int:
        return int(self.samples.shape[0])

    @property
    def last_step(self) -> int:
        return self.length - 1

    def column(self, name: str) -> np.ndarray:
        try:
            return self.samples[:, self.dims.index(name)]
        except ValueError:
            raise SignalFormatError(f"signal has no dimension '{name}'") from None

    def values_at(self, step: int) -> dict[str, float]:
        return dict(zip(self.dims, (float(v) for v in self.samples[step])))

    def times(self) -> np.ndarray:
        return np.arange(self.length) * self.delta_t

    @classmethod
    def from_csv(cls, path: str | Path) -> "Signal":
        """Read a ``t,<dim>,...`` file; t must be uniformly spaced."""
        path = Path(path)
        try:
            with path.open(newline="") as handle:
                rows = [row for row in csv.reader(handle) if row and any(cell.strip() for cell in row)]
        except OSError as exc:
            raise SignalFormatError(f"cannot read {path}: {exc}") from exc
        if not rows:
            raise SignalFormatError(f"{path} is empty")
        header = [cell.strip() for cell in rows[0]]
        if len(header) < 2 or header[0] != "t":
            raise SignalFormatError(f"{path}: header must be 't,<dim>,...', got {rows[0]}")
        body = rows[1:]
        if not body:
            raise SignalFormatError(f"{path} has a header but no samples")
        try:
            table = np.array([[float(cell) for cell in row] for row in body], dtype=float)
        except ValueError as exc:
            raise SignalFormatError(f"{path}: {exc}") from exc
        if table.ndim != 2 or table.shape[1] != len(header):
            raise SignalFormatError(f"{path}: every row needs {len(header)} columns")
        times = table[:, 0]
        delta_t = float(times[1] - times[0]) if len(times) > 1 else 1.0
        if len(times) > 1:
            expected = times[0] + np.arange(len(times)) * delta_t
            if np.max(np.abs(times - expected)) > SPACING_TOLERANCE * delta_t or delta_t <= 0:
                raise SignalFormatError(f"{path}: t column is not uniformly spaced")
        logger.debug(f"Loaded {len(times)} samples of {header[1:]} from {path}")
        return cls(delta_t, tuple(header[1:]), table[:, 1:])

    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["t", *self.dims])
            for t, row in zip(self.times(), self.samples):
                writer.writerow([format(float(t), ".17g"), *(format(float(v), ".17g") for v in row)])
