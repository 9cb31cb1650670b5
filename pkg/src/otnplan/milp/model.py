"""Generic mixed binary linear program representation and solution records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "ModelError",
    "Variable",
    "Constraint",
    "MilpModel",
    "MilpStats",
    "MilpSolution",
    "check_solution",
    "GAP_FLOOR",
]

GAP_FLOOR = 1e-9
FEASIBILITY_TOL = 1e-6
INTEGRALITY_TOL = 1e-6

RELATIONS = ("<=", "=", ">=")


class ModelError(ValueError):
    """Structural problem in a model: undeclared variable, bad relation, ..."""


@dataclass
class Variable:
    id: int
    name: str
    kind: str  # "binary" | "continuous"
    lower: float
    upper: float
    objective: float


@dataclass
class Constraint:
    name: str
    terms: tuple[tuple[int, float], ...]
    relation: str
    rhs: float


class MilpModel:
    """Minimization model over binary and continuous variables.

    Binary variables must keep their bounds inside [0, 1]; tightening to
    [0, 0] or [1, 1] is how builders fix excluded entities.
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self._names: dict[str, int] = {}

    def add_variable(self, name: str, kind: str = "continuous",
                     lower: float = 0.0, upper: float | None = None,
                     objective: float = 0.0) -> int:
        if kind not in ("binary", "continuous"):
            raise ModelError(f"unknown variable kind {kind!r}")
        if name in self._names:
            raise ModelError(f"duplicate variable name {name!r}")
        if upper is None:
            upper = 1.0 if kind == "binary" else math.inf
        if kind == "binary":
            if lower < 0 or upper > 1 or lower > upper:
                raise ModelError(f"binary variable {name!r} bounds must lie inside [0, 1]")
        elif lower > upper:
            raise ModelError(f"variable {name!r} has lower > upper")
        vid = len(self.variables)
        self.variables.append(Variable(vid, name, kind, float(lower), float(upper), float(objective)))
        self._names[name] = vid
        return vid

    def add_constraint(self, name: str, terms: Iterable[tuple[int, float]],
                       relation: str, rhs: float) -> None:
        if relation not in RELATIONS:
            raise ModelError(f"unknown relation {relation!r}")
        packed = []
        for vid, coef in terms:
            if not (0 <= vid < len(self.variables)):
                raise ModelError(f"constraint {name!r} references undeclared variable id {vid}")
            if coef != 0.0:
                packed.append((vid, float(coef)))
        self.constraints.append(Constraint(name, tuple(packed), relation, float(rhs)))

    def var_id(self, name: str) -> int:
        try:
            return self._names[name]
        except KeyError:
            raise ModelError(f"unknown variable name {name!r}") from None

    def var_name(self, vid: int) -> str:
        return self.variables[vid].name

    def set_objective(self, coefficients: Mapping[int, float]) -> None:
        """Replace the objective vector (used for staged solves)."""
        for var in self.variables:
            var.objective = 0.0
        for vid, coef in coefficients.items():
            if not (0 <= vid < len(self.variables)):
                raise ModelError(f"objective references undeclared variable id {vid}")
            self.variables[vid].objective = float(coef)

    def objective_vector(self) -> dict[int, float]:
        return {v.id: v.objective for v in self.variables if v.objective != 0.0}

    def binary_ids(self) -> tuple[int, ...]:
        return tuple(v.id for v in self.variables if v.kind == "binary")

    def fix_variable(self, vid: int, value: float) -> None:
        var = self.variables[vid]
        var.lower = float(value)
        var.upper = float(value)

    def evaluate_objective(self, values: Mapping[int, float]) -> float:
        return sum(v.objective * values.get(v.id, 0.0) for v in self.variables)


@dataclass(frozen=True)
class MilpStats:
    nodes: int = 0
    lp_iterations: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class MilpSolution:
    status: str  # optimal | feasible-with-gap | infeasible | unbounded | time-limit
    values: Mapping[int, float] = field(default_factory=dict)
    objective: float = math.nan
    best_bound: float = math.nan
    gap: float = math.nan
    stats: MilpStats = field(default_factory=MilpStats)
    infeasible_rows: tuple[str, ...] = ()

    @property
    def has_incumbent(self) -> bool:
        return self.status in ("optimal", "feasible-with-gap") or (
            self.status == "time-limit" and bool(self.values)
        )

    def value(self, vid: int) -> float:
        return self.values.get(vid, 0.0)


def relative_gap(objective: float, bound: float) -> float:
    return (objective - bound) / max(abs(objective), GAP_FLOOR)


def check_solution(model: MilpModel, values: Mapping[int, float],
                   tol: float = FEASIBILITY_TOL) -> tuple[str, ...]:
    """Independent feasibility re-check: re-reads the model, returns violations.

    Used by the acceptance harness and by external-solution validation; keeps
    no state from the solver.
    """
    problems: list[str] = []
    for var in model.variables:
        x = values.get(var.id, 0.0)
        if x < var.lower - tol or x > var.upper + tol:
            problems.append(f"variable {var.name} = {x} outside [{var.lower}, {var.upper}]")
        if var.kind == "binary" and abs(x - round(x)) > INTEGRALITY_TOL:
            problems.append(f"variable {var.name} = {x} violates integrality")
    for con in model.constraints:
        lhs = sum(coef * values.get(vid, 0.0) for vid, coef in con.terms)
        if con.relation == "<=" and lhs > con.rhs + tol:
            problems.append(f"constraint {con.name}: {lhs} > {con.rhs}")
        elif con.relation == ">=" and lhs < con.rhs - tol:
            problems.append(f"constraint {con.name}: {lhs} < {con.rhs}")
        elif con.relation == "=" and abs(lhs - con.rhs) > tol:
            problems.append(f"constraint {con.name}: {lhs} != {con.rhs}")
    return tuple(problems)
