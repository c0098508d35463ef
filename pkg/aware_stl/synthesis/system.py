from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from aware_stl.exceptions import SynthesisError


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Discrete-time dynamics x[k+1] = A x[k] + B u[k] from a fixed x[0]."""

    A: np.ndarray
    B: np.ndarray
    x0: np.ndarray
    delta_t: float
    dims: tuple[str, ...]
    inputs: tuple[str, ...]

    def __post_init__(self) -> None:
        a = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_2d(np.asarray(self.B, dtype=float))
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        n = len(self.dims)
        if a.shape != (n, n):
            raise SynthesisError(f"A must be {n}x{n} for dims {self.dims}, got {a.shape}")
        if b.shape != (n, len(self.inputs)):
            raise SynthesisError(f"B must be {n}x{len(self.inputs)}, got {b.shape}")
        if x0.shape != (n,):
            raise SynthesisError(f"x0 must have {n} entries, got {x0.shape[0]}")
        if not (self.delta_t > 0 and math.isfinite(self.delta_t)):
            raise SynthesisError(f"delta_t must be positive, got {self.delta_t}")
        names = list(self.dims) + list(self.inputs)
        if len(set(names)) != len(names) or not all(names):
            raise SynthesisError(f"state and input names must be distinct and non-empty: {names}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def m(self) -> int:
        return len(self.inputs)

    def simulate(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=float).reshape(-1, self.m)
        states = np.zeros((len(inputs) + 1, self.n))
        states[0] = self.x0
        for k, u in enumerate(inputs):
            states[k + 1] = self.A @ states[k] + self.B @ u
        return states

    def residual(self, states: np.ndarray, inputs: np.ndarray) -> float:
        """Largest |x[k+1] - A x[k] - B u[k]| over the trajectory."""
        if len(inputs) == 0:
            return 0.0
        predicted = states[:-1] @ self.A.T + inputs @ self.B.T
        return float(np.max(np.abs(states[1:] - predicted)))

    def state_bounds(self, horizon: int, u_lo: np.ndarray, u_hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Interval hull of reachable states for inputs inside [u_lo, u_hi]."""
        a_pos, a_neg = np.maximum(self.A, 0), np.minimum(self.A, 0)
        b_pos, b_neg = np.maximum(self.B, 0), np.minimum(self.B, 0)
        lo = np.zeros((horizon + 1, self.n))
        hi = np.zeros((horizon + 1, self.n))
        lo[0] = hi[0] = self.x0
        with np.errstate(invalid="ignore"):
            for k in range(horizon):
                lo[k + 1] = a_pos @ lo[k] + a_neg @ hi[k] + b_pos @ u_lo + b_neg @ u_hi
                hi[k + 1] = a_pos @ hi[k] + a_neg @ lo[k] + b_pos @ u_hi + b_neg @ u_lo
        lo = np.where(np.isnan(lo), -np.inf, lo)
        hi = np.where(np.isnan(hi), np.inf, hi)
        return lo, hi


def double_integrator(delta_t: float, x0: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> LinearSystem:
    """Planar double integrator with states (x, vx, y, vy) and inputs (ux, uy)."""
    dt = float(delta_t)
    if not dt > 0:
        raise SynthesisError(f"delta_t must be positive, got {delta_t}")
    a = np.array(
        [
            [1.0, dt, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, dt],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    b = np.array(
        [
            [0.5 * dt**2, 0.0],
            [dt, 0.0],
            [0.0, 0.5 * dt**2],
            [0.0, dt],
        ]
    )
    return LinearSystem(a, b, np.asarray(x0, dtype=float), dt, ("x", "vx", "y", "vy"), ("ux", "uy"))
