"""Branch-and-bound over the bounded-variable simplex relaxation.

Best-bound node selection, branching on the most fractional binary (ties to
the lowest variable id), optimality-gap and wall-clock termination.  The
search is single threaded and fully deterministic: identical models and
parameters reproduce identical incumbents, node counts and iteration counts.
"""

from __future__ import annotations

import heapq
import math
import time

import numpy as np

from .model import (INTEGRALITY_TOL, MilpModel, MilpSolution, MilpStats,
                    check_solution, relative_gap)
from .simplex import simplex_solve

__all__ = ["solve_lp", "solve_milp"]


class _Arrays:
    """Dense snapshot of a model; per-node solves only swap bounds."""

    def __init__(self, model: MilpModel):
        n = len(model.variables)
        rows = []
        relations = []
        rhs = []
        self.kept_rows: list[int] = []
        for idx, con in enumerate(model.constraints):
            if not con.terms:
                # presolve: empty constraint is either vacuous or infeasible
                ok = ((con.relation == "<=" and 0.0 <= con.rhs + 1e-9)
                      or (con.relation == ">=" and 0.0 >= con.rhs - 1e-9)
                      or (con.relation == "=" and abs(con.rhs) <= 1e-9))
                if not ok:
                    self.trivially_infeasible = con.name
                continue
            row = np.zeros(n)
            for vid, coef in con.terms:
                row[vid] += coef
            rows.append(row)
            relations.append(con.relation)
            rhs.append(con.rhs)
            self.kept_rows.append(idx)
        self.A = np.array(rows) if rows else np.zeros((0, n))
        self.relations = relations
        self.rhs = np.array(rhs) if rhs else np.zeros(0)
        self.c = np.array([v.objective for v in model.variables])
        self.lo = np.array([v.lower for v in model.variables])
        self.hi = np.array([v.upper for v in model.variables])
        self.binary = np.array([v.kind == "binary" for v in model.variables])

    trivially_infeasible: str | None = None


def _lp(arrays: _Arrays, lo: np.ndarray, hi: np.ndarray):
    return simplex_solve(arrays.A, arrays.relations, arrays.rhs, arrays.c, lo, hi)


def solve_lp(model: MilpModel) -> MilpSolution:
    """Solve the LP relaxation (integrality dropped)."""
    arrays = _Arrays(model)
    if arrays.trivially_infeasible:
        return MilpSolution(status="infeasible", infeasible_rows=(arrays.trivially_infeasible,))
    start = time.perf_counter()
    res = _lp(arrays, arrays.lo, arrays.hi)
    wall = time.perf_counter() - start
    stats = MilpStats(nodes=1, lp_iterations=res.iterations, wall_time=wall)
    if res.status == "infeasible":
        names = tuple(model.constraints[arrays.kept_rows[i]].name for i in res.infeasible_rows)
        return MilpSolution(status="infeasible", stats=stats, infeasible_rows=names)
    if res.status == "unbounded":
        return MilpSolution(status="unbounded", stats=stats, best_bound=-math.inf)
    values = {i: float(res.x[i]) for i in range(len(res.x))}
    return MilpSolution(status="optimal", values=values, objective=res.objective,
                        best_bound=res.objective, gap=0.0, stats=stats)


def solve_milp(model: MilpModel, gap: float = 0.0,
               time_limit: float | None = None) -> MilpSolution:
    """Branch-and-bound search honouring a relative optimality gap and a
    wall-clock limit.

    The returned incumbent always satisfies every constraint and every
    integrality requirement within 1e-6 (values are rounded and re-verified
    before acceptance).
    """
    if gap < 0:
        raise ValueError("gap must be non-negative")
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit

    def out_of_time() -> bool:
        return deadline is not None and time.perf_counter() >= deadline

    arrays = _Arrays(model)
    nodes = 0
    lp_iters = 0
    incumbent: dict[int, float] | None = None
    incumbent_obj = math.inf

    def build(status: str, best_bound: float) -> MilpSolution:
        wall = time.perf_counter() - start
        stats = MilpStats(nodes=nodes, lp_iterations=lp_iters, wall_time=wall)
        if incumbent is None:
            return MilpSolution(status=status, stats=stats, best_bound=best_bound)
        g = max(0.0, relative_gap(incumbent_obj, best_bound))
        return MilpSolution(status=status, values=dict(incumbent), objective=incumbent_obj,
                            best_bound=best_bound, gap=g, stats=stats)

    if arrays.trivially_infeasible:
        return MilpSolution(status="infeasible", infeasible_rows=(arrays.trivially_infeasible,))
    if out_of_time():
        return build("time-limit", -math.inf)

    binary_ids = np.nonzero(arrays.binary)[0]

    # heap of (parent bound, tiebreak counter, lo array, hi array)
    counter = 0
    heap: list[tuple[float, int, np.ndarray, np.ndarray]] = []
    heapq.heappush(heap, (-math.inf, counter, arrays.lo.copy(), arrays.hi.copy()))
    root_infeasible_rows: tuple[str, ...] = ()
    root_unbounded = False

    while heap:
        bound_est, _, lo, hi = heapq.heappop(heap)
        open_bound = bound_est  # heap is bound-ordered, so this is the global lower bound
        if incumbent is not None:
            gap_now = relative_gap(incumbent_obj, min(open_bound, incumbent_obj))
            if gap_now <= gap + 1e-12:
                return build("optimal" if gap_now <= 1e-12 else "feasible-with-gap",
                             min(open_bound, incumbent_obj))
            if bound_est >= incumbent_obj - 1e-9:
                continue
        if out_of_time():
            return build("time-limit", min(open_bound, incumbent_obj))

        nodes += 1
        res = _lp(arrays, lo, hi)
        lp_iters += res.iterations
        if res.status == "infeasible":
            if nodes == 1:
                root_infeasible_rows = tuple(
                    model.constraints[arrays.kept_rows[i]].name for i in res.infeasible_rows)
            continue
        if res.status == "unbounded":
            if nodes == 1:
                root_unbounded = True
                break
            continue
        if incumbent is not None and res.objective >= incumbent_obj - 1e-9:
            continue

        frac = np.abs(res.x[binary_ids] - np.round(res.x[binary_ids])) if binary_ids.size else np.zeros(0)
        if binary_ids.size == 0 or frac.max() <= INTEGRALITY_TOL:
            values = res.x.copy()
            values[binary_ids] = np.round(values[binary_ids])
            cand = {i: float(values[i]) for i in range(len(values))}
            if not check_solution(model, cand):
                obj = float(arrays.c @ values)
                if obj < incumbent_obj - 1e-12:
                    incumbent = cand
                    incumbent_obj = obj
                continue
            # rounding broke feasibility: branch on the most fractional binary anyway
            if binary_ids.size == 0 or frac.max() <= 0:
                continue

        scores = np.minimum(frac, 1.0 - frac)
        pick = int(binary_ids[int(np.argmax(scores))])
        for fix in (0.0, 1.0):
            lo2 = lo.copy()
            hi2 = hi.copy()
            lo2[pick] = fix
            hi2[pick] = fix
            counter += 1
            heapq.heappush(heap, (res.objective, counter, lo2, hi2))

    if root_unbounded:
        return MilpSolution(status="unbounded", best_bound=-math.inf,
                            stats=MilpStats(nodes=nodes, lp_iterations=lp_iters,
                                            wall_time=time.perf_counter() - start))
    if incumbent is None:
        wall = time.perf_counter() - start
        return MilpSolution(status="infeasible",
                            stats=MilpStats(nodes=nodes, lp_iterations=lp_iters, wall_time=wall),
                            infeasible_rows=root_infeasible_rows)
    return build("optimal", incumbent_obj)
