from __future__ import annotations

import pytest

from aware_stl.formula import horizon
from aware_stl.parser import parse

HORIZONS = [
    ("x >= 0", 0),
    ("!x >= 0", 0),
    ("G[0,5] F[0,4] x >= 0", 9),
    ("G[0,5] x >= 0 && F[0,4] x >= 10", 5),
    ("G[2,7] x >= 0", 7),
    ("F[1,3] G[0,2] x >= 0 || G[0,1] x >= 1", 5),
    ("x >= 0 => F[0,6] y >= 1", 6),
    ("I[0,4](x) >= 1", 4),
    ("I[2,5](x) >= 1", 5),
    ("I[-3,2](x) >= 1", 5),
    ("I[-6,-2](x) >= 1", 6),
    ("I[-5,5](x) >= 1", 10),
    ("F[0,3] I[0,2](x) >= 1", 5),
    ("G[1,4] I[1,3](x) >= 1", 7),
    ("F[0,4] I[-2,0](x) >= 1", 4),
    ("G[0,2] I[-3,-1](x) >= 1", 2),
    ("F[0,14] (G[0,6] x >= 4 && I[0,6](abs(vx)) >= 2)", 20),
    ("D+(x) >= 0", 1),
    ("D-(x) >= 0", 0),
    ("G[0,19] D+(vx) <= 0.5 && G[1,20] D-(vx) >= -0.25", 20),
]


@pytest.mark.parametrize("text, expected", HORIZONS)
def test_horizon_table(text: str, expected: float) -> None:
    assert horizon(parse(text), 1.0) == expected


def test_right_derivative_uses_the_sampling_step() -> None:
    assert horizon(parse("G[0,2] D+(x) >= 0"), 0.5) == 2.5


def test_right_derivative_needs_delta_t() -> None:
    with pytest.raises(ValueError):
        horizon(parse("D+(x) >= 0"))


def test_left_derivative_needs_no_delta_t() -> None:
    assert horizon(parse("F[0,3] D-(x) >= 0")) == 3
