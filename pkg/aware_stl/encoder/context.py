from __future__ import annotations

import logging
import math
from typing import Mapping

from aware_stl.exceptions import BigMTooSmallError, EncodingError, WindowOverflowError
from aware_stl.formula.ast import Formula, LinearExpr
from aware_stl.milp.model import MilpModel, Sense, VarRef
from aware_stl.monitor.signal import Signal

logger = logging.getLogger(__name__)

Affine = tuple[dict[VarRef, float], float]

NAME_LEGEND = (
    "z_<node>_<k>: satisfaction binary of formula node <node> at step k",
    "s_<node>_<k>: side selector of the magnitude atom <node> at step k",
    "w_<dim>_<k>, ws_<dim>_<k>: |<dim>| at step k and its sign binary",
    "e_<index>_<k>: expression value at step k, resolved by encode_abs",
)


class EncodingContext:
    """Owns the model being written and the memo of satisfaction binaries.

    ``signal`` maps (dimension, step) to the model variable holding that
    sample, for steps 0..horizon. One context is written by one encode call
    at a time.
    """

    def __init__(
        self,
        model: MilpModel,
        delta_t: float,
        horizon: int,
        signal: Mapping[tuple[str, int], VarRef],
        *,
        big_m: float = 1e4,
        tighten: bool = True,
    ):
        if not big_m > 0:
            raise EncodingError(f"big_m must be positive, got {big_m}")
        self.model = model
        self.delta_t = delta_t
        self.horizon = horizon
        self.signal = dict(signal)
        self.big_m = float(big_m)
        self.tighten = tighten
        self.memo: dict[tuple[Formula, int], VarRef] = {}
        self.abs_memo: dict[tuple[str, int], VarRef] = {}
        self.ids: dict[Formula, int] = {}
        self.dims = sorted({dim for dim, _ in self.signal})
        for line in NAME_LEGEND:
            if line not in model.notes:
                model.notes.append(line)

    @classmethod
    def pinned(cls, signal: Signal, *, big_m: float = 1e4, tighten: bool = True) -> "EncodingContext":
        """Context over a fixed signal: one variable per sample, held by an equality row."""
        model = MilpModel("pinned")
        table: dict[tuple[str, int], VarRef] = {}
        for k in range(signal.length):
            for dim, value in signal.values_at(k).items():
                var = model.add_var(f"x_{dim}_{k}", lo=value, hi=value)
                model.add_constraint([(var, 1.0)], Sense.EQ, value, name=f"pin_{dim}_{k}")
                table[(dim, k)] = var
        return cls(model, signal.delta_t, signal.last_step, table, big_m=big_m, tighten=tighten)

    def node_id(self, node: Formula) -> int:
        return self.ids.setdefault(node, len(self.ids))

    def sample(self, dim: str, step: int) -> VarRef:
        if not 0 <= step <= self.horizon:
            raise WindowOverflowError(f"step {step} of '{dim}' is outside 0..{self.horizon}")
        try:
            return self.signal[(dim, step)]
        except KeyError:
            raise EncodingError(f"no variable for dimension '{dim}' at step {step}") from None

    def bounds(self, var: VarRef) -> tuple[float, float]:
        current = self.model.variables[var.index]
        return current.lo, current.hi

    def affine_bounds(self, affine: Affine) -> tuple[float, float]:
        terms, constant = affine
        lo = hi = constant
        for var, coef in terms.items():
            v_lo, v_hi = self.bounds(var)
            if coef >= 0:
                lo += coef * v_lo if coef else 0.0
                hi += coef * v_hi if coef else 0.0
            else:
                lo += coef * v_hi
                hi += coef * v_lo
        return lo, hi

    def expr_at(self, expr: LinearExpr, step: int, scale: float = 1.0) -> Affine:
        """``scale * expr`` at ``step`` with absolute terms replaced by their magnitude variables."""
        terms: dict[VarRef, float] = {}
        for term in expr.terms:
            var = self.magnitude(term.name, step) if term.absolute else self.sample(term.name, step)
            terms[var] = terms.get(var, 0.0) + scale * term.coef
        return terms, scale * expr.constant

    def magnitude(self, dim: str, step: int) -> VarRef:
        """Variable w equal to |v| for the sample v, with a sign binary s.

        Rows: w >= v, w >= -v, w <= v + M(1 - s), w <= -v + M s. Shared by
        every atom that reads |v| at this step.
        """
        key = (dim, step)
        if key in self.abs_memo:
            return self.abs_memo[key]
        v = self.sample(dim, step)
        lo, hi = self.bounds(v)
        peak = max(abs(lo), abs(hi))
        floor = 0.0 if lo <= 0 <= hi else min(abs(lo), abs(hi))
        w = self.model.add_var(f"w_{dim}_{step}", lo=floor, hi=peak)
        s = self.model.add_binary(f"ws_{dim}_{step}")
        m = self.big_m_for(2 * peak, f"|{dim}| at step {step}")
        name = f"abs_{dim}_{step}"
        self.model.add_constraint([(w, 1.0), (v, -1.0)], Sense.GE, 0.0, name=f"{name}_a")
        self.model.add_constraint([(w, 1.0), (v, 1.0)], Sense.GE, 0.0, name=f"{name}_b")
        self.model.add_constraint([(w, 1.0), (v, -1.0), (s, m)], Sense.LE, m, name=f"{name}_c")
        self.model.add_constraint([(w, 1.0), (v, 1.0), (s, -m)], Sense.LE, 0.0, name=f"{name}_d")
        self.abs_memo[key] = w
        return w

    def big_m_for(self, bound: float, what: str) -> float:
        """M covering ``bound``; the box value when finite and tightening is on."""
        if not math.isfinite(bound):
            return self.big_m
        if bound > self.big_m * (1 + 1e-12):
            raise BigMTooSmallError(f"{what} reaches {bound:.6g}, above big_m={self.big_m:.6g}")
        return max(bound, 0.0) if self.tighten else self.big_m
