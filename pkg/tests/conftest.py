from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from aware_stl.config import Config
from aware_stl.monitor import Signal

WORKED_EXAMPLE = (1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 0.1)


@pytest.fixture
def config() -> Config:
    return Config.load_from_file_name()


@pytest.fixture
def worked_signal() -> Signal:
    return Signal.from_array(1.0, ["x"], np.array(WORKED_EXAMPLE).reshape(-1, 1))


@pytest.fixture
def worked_csv(tmp_path: Path, worked_signal: Signal) -> Path:
    path = tmp_path / "worked.csv"
    worked_signal.to_csv(path)
    return path


@pytest.fixture
def ramp_signal() -> Signal:
    """x = 0, 1, ..., 9 and y = 9, 8, ..., 0 sampled every 0.5 s."""
    x = np.arange(10, dtype=float)
    return Signal.from_array(0.5, ["x", "y"], np.column_stack([x, 9 - x]))
