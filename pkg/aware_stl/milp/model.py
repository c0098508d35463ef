"""In-memory mixed-integer linear programs (minimisation, binaries only)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from aware_stl.exceptions import ModelError


class VarKind(str, Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class VarRef:
    """Handle to a model variable. Identity is the index alone."""

    index: int
    name: str = field(compare=False)
    kind: VarKind = field(default=VarKind.CONTINUOUS, compare=False)
    lo: float = field(default=0.0, compare=False)
    hi: float = field(default=math.inf, compare=False)

    @property
    def is_binary(self) -> bool:
        return self.kind == VarKind.BINARY


TermsLike = Mapping[VarRef, float] | Iterable[tuple[VarRef, float]]


def merge_terms(terms: TermsLike) -> tuple[tuple[VarRef, float], ...]:
    """Sum coefficients of repeated variables, keeping first-seen order."""
    items = terms.items() if isinstance(terms, Mapping) else terms
    merged: dict[VarRef, float] = {}
    for var, coef in items:
        merged[var] = merged.get(var, 0.0) + float(coef)
    return tuple(merged.items())


@dataclass(frozen=True)
class LinConstraint:
    terms: tuple[tuple[VarRef, float], ...]
    sense: Sense
    rhs: float
    name: str

    def activity(self, values: np.ndarray) -> float:
        return float(sum(coef * values[var.index] for var, coef in self.terms))

    def violation(self, values: np.ndarray) -> float:
        lhs = self.activity(values)
        match self.sense:
            case Sense.LE:
                return max(0.0, lhs - self.rhs)
            case Sense.GE:
                return max(0.0, self.rhs - lhs)
            case _:
                return abs(lhs - self.rhs)


class MilpModel:
    """Variables, rows and a linear objective to minimise."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[VarRef] = []
        self.constraints: list[LinConstraint] = []
        self.objective: dict[VarRef, float] = {}
        self.objective_constant = 0.0
        self.notes: list[str] = []
        self._by_name: dict[str, VarRef] = {}

    def __repr__(self) -> str:
        return (
            f"MilpModel({self.name!r}, vars={len(self.variables)}, "
            f"binaries={self.num_binaries}, rows={len(self.constraints)})"
        )

    def add_var(
        self,
        name: str,
        kind: VarKind = VarKind.CONTINUOUS,
        lo: float = 0.0,
        hi: float = math.inf,
    ) -> VarRef:
        if name in self._by_name:
            raise ModelError(f"variable '{name}' is already declared")
        if kind == VarKind.BINARY:
            lo, hi = 0.0, 1.0
        lo, hi = float(lo), float(hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi or lo == math.inf or hi == -math.inf:
            raise ModelError(f"variable '{name}' has bad bounds [{lo}, {hi}]")
        var = VarRef(len(self.variables), name, kind, lo, hi)
        self.variables.append(var)
        self._by_name[name] = var
        return var

    def add_binary(self, name: str) -> VarRef:
        return self.add_var(name, VarKind.BINARY)

    def set_bounds(self, var: VarRef, lo: float, hi: float) -> VarRef:
        self._check_declared(var)
        current = self.variables[var.index]
        if current.is_binary and (lo < 0 or hi > 1):
            raise ModelError(f"binary '{current.name}' bounds must stay inside [0, 1]")
        if lo > hi:
            raise ModelError(f"variable '{current.name}' has bad bounds [{lo}, {hi}]")
        updated = VarRef(current.index, current.name, current.kind, float(lo), float(hi))
        self.variables[var.index] = updated
        self._by_name[current.name] = updated
        return updated

    def add_constraint(
        self,
        terms: TermsLike,
        sense: Sense | str,
        rhs: float,
        name: str | None = None,
    ) -> LinConstraint:
        merged = merge_terms(terms)
        for var, _ in merged:
            self._check_declared(var)
        if not math.isfinite(rhs):
            raise ModelError(f"row '{name}' has non-finite right-hand side {rhs}")
        row = LinConstraint(
            terms=tuple((self.variables[var.index], coef) for var, coef in merged),
            sense=Sense(sense),
            rhs=float(rhs),
            name=name or f"c{len(self.constraints)}",
        )
        self.constraints.append(row)
        return row

    def minimize(self, terms: TermsLike, constant: float = 0.0) -> None:
        merged = merge_terms(terms)
        for var, _ in merged:
            self._check_declared(var)
        self.objective = dict(merged)
        self.objective_constant = float(constant)

    def var_by_name(self, name: str) -> VarRef:
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelError(f"no variable named '{name}'") from None

    def has_var(self, name: str) -> bool:
        return name in self._by_name

    @property
    def binaries(self) -> list[VarRef]:
        return [var for var in self.variables if var.is_binary]

    @property
    def num_binaries(self) -> int:
        return sum(1 for var in self.variables if var.is_binary)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower = np.array([var.lo for var in self.variables], dtype=float)
        upper = np.array([var.hi for var in self.variables], dtype=float)
        return lower, upper

    def objective_value(self, values: np.ndarray) -> float:
        return self.objective_constant + float(
            sum(coef * values[var.index] for var, coef in self.objective.items())
        )

    def max_violation(self, values: np.ndarray) -> float:
        """Largest row or bound violation of a full assignment."""
        worst = 0.0
        for row in self.constraints:
            worst = max(worst, row.violation(values))
        for var in self.variables:
            value = values[var.index]
            worst = max(worst, var.lo - value, value - var.hi)
        return worst

    def check_assignment(
        self,
        values: np.ndarray,
        feasibility_tol: float = 1e-7,
        integrality_tol: float = 1e-6,
    ) -> list[str]:
        """Describe every row, bound or integrality violation beyond tolerance."""
        problems: list[str] = []
        for row in self.constraints:
            excess = row.violation(values)
            if excess > feasibility_tol * (1.0 + abs(row.rhs)):
                problems.append(f"row {row.name} violated by {excess:.3g}")
        for var in self.variables:
            value = values[var.index]
            if value < var.lo - feasibility_tol or value > var.hi + feasibility_tol:
                problems.append(f"{var.name}={value:.6g} outside [{var.lo}, {var.hi}]")
            if var.is_binary and abs(value - round(value)) > integrality_tol:
                problems.append(f"binary {var.name}={value:.6g} is fractional")
        return problems

    def matrix(self) -> tuple[np.ndarray, list[Sense], np.ndarray, np.ndarray]:
        """Dense (A, senses, rhs, cost) for the LP engines."""
        a = np.zeros((len(self.constraints), len(self.variables)), dtype=float)
        for i, row in enumerate(self.constraints):
            for var, coef in row.terms:
                a[i, var.index] += coef
        senses = [row.sense for row in self.constraints]
        rhs = np.array([row.rhs for row in self.constraints], dtype=float)
        cost = np.zeros(len(self.variables), dtype=float)
        for var, coef in self.objective.items():
            cost[var.index] += coef
        return a, senses, rhs, cost

    def _check_declared(self, var: VarRef) -> None:
        if not (0 <= var.index < len(self.variables)) or self.variables[var.index].name != var.name:
            raise ModelError(f"variable '{var.name}' is not declared in model '{self.name}'")
