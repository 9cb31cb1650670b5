import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from otnplan.milp import (MilpModel, ModelError, check_solution, solve_lp,
                          solve_milp)


def lp_min_x_ge_3():
    m = MilpModel("min-x")
    x = m.add_variable("x", "continuous", 0, math.inf, objective=1.0)
    m.add_constraint("floor", [(x, 1.0)], ">=", 3.0)
    return m


class TestSolveLp:
    def test_simple_bound(self):
        sol = solve_lp(lp_min_x_ge_3())
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(3.0)

    def test_infeasible(self):
        m = MilpModel("infeasible")
        x = m.add_variable("x", "continuous", 0, math.inf, 1.0)
        m.add_constraint("ge", [(x, 1.0)], ">=", 1.0)
        m.add_constraint("le", [(x, 1.0)], "<=", 0.0)
        sol = solve_lp(m)
        assert sol.status == "infeasible"
        assert sol.infeasible_rows  # names the offending rows

    def test_unbounded(self):
        m = MilpModel("unbounded")
        x = m.add_variable("x", "continuous", 0, math.inf, -1.0)
        m.add_constraint("ge", [(x, 1.0)], ">=", 0.0)
        assert solve_lp(m).status == "unbounded"

    def test_undeclared_variable_rejected(self):
        m = MilpModel("broken")
        m.add_variable("x", "continuous", 0, 1, 1.0)
        with pytest.raises(ModelError):
            m.add_constraint("bad", [(7, 1.0)], "<=", 1.0)

    def test_random_lps_match_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            n = int(rng.integers(2, 6))
            rows = int(rng.integers(1, 5))
            A = np.round(rng.uniform(-4, 4, (rows, n)), 1)
            b = np.round(rng.uniform(-2, 6, rows), 1)
            c = np.round(rng.uniform(-3, 3, n), 1)
            rels = rng.choice(["<=", ">=", "="], rows, p=[0.5, 0.3, 0.2])
            hi = np.where(rng.random(n) < 0.7, rng.uniform(1, 5, n).round(1), np.inf)
            m = MilpModel("rand")
            ids = [m.add_variable(f"v{i}", "continuous", 0.0, hi[i], c[i])
                   for i in range(n)]
            A_ub, b_ub, A_eq, b_eq = [], [], [], []
            for i in range(rows):
                m.add_constraint(f"c{i}", [(ids[j], A[i, j]) for j in range(n)],
                                 rels[i], b[i])
                if rels[i] == "<=":
                    A_ub.append(A[i]); b_ub.append(b[i])
                elif rels[i] == ">=":
                    A_ub.append(-A[i]); b_ub.append(-b[i])
                else:
                    A_eq.append(A[i]); b_eq.append(b[i])
            ours = solve_lp(m)
            ref = linprog(c, A_ub=np.array(A_ub) if A_ub else None,
                          b_ub=np.array(b_ub) if b_ub else None,
                          A_eq=np.array(A_eq) if A_eq else None,
                          b_eq=np.array(b_eq) if b_eq else None,
                          bounds=[(0, None if math.isinf(h) else h) for h in hi],
                          method="highs")
            if ref.status == 0:
                assert ours.status == "optimal"
                assert ours.objective == pytest.approx(ref.fun, abs=1e-6, rel=1e-6)
            elif ref.status == 2:
                assert ours.status == "infeasible"
            elif ref.status == 3:
                assert ours.status == "unbounded"


def knapsack_model():
    m = MilpModel("knapsack")
    xs = [m.add_variable(f"x{i}", "binary", objective=c)
          for i, c in enumerate([-5.0, -4.0, -3.0])]
    m.add_constraint("cap", [(xs[0], 2.0), (xs[1], 3.0), (xs[2], 1.0)], "<=", 5.0)
    return m


class TestSolveMilp:
    def test_cover(self):
        m = MilpModel("cover")
        x = m.add_variable("x", "binary", objective=1.0)
        y = m.add_variable("y", "binary", objective=1.0)
        m.add_constraint("one", [(x, 1.0), (y, 1.0)], ">=", 1.0)
        sol = solve_milp(m, gap=0.0)
        assert sol.status == "optimal"
        assert sol.objective == pytest.approx(1.0)

    def test_time_limit_zero(self):
        sol = solve_milp(knapsack_model(), gap=0.0, time_limit=0)
        assert sol.status == "time-limit"
        assert not sol.has_incumbent

    def test_incumbent_passes_independent_checker(self):
        m = knapsack_model()
        sol = solve_milp(m, gap=0.0)
        assert sol.status == "optimal"
        assert not check_solution(m, sol.values)
        assert sol.objective >= sol.best_bound - 1e-9

    def test_deterministic_nodes_and_values(self):
        runs = [solve_milp(knapsack_model(), gap=0.0) for _ in range(2)]
        assert runs[0].values == runs[1].values
        assert runs[0].stats.nodes == runs[1].stats.nodes
        assert runs[0].stats.lp_iterations == runs[1].stats.lp_iterations

    def test_empty_constraint_presolve(self):
        m = MilpModel("empty-rows")
        m.add_variable("x", "binary", objective=1.0)
        m.add_constraint("fine", [], "<=", 2.0)
        assert solve_milp(m).status == "optimal"
        m2 = MilpModel("contradiction")
        m2.add_variable("x", "binary", objective=1.0)
        m2.add_constraint("impossible", [], ">=", 1.0)
        assert solve_milp(m2).status == "infeasible"

    def test_gap_stop_reports_achieved_gap(self):
        rng = np.random.default_rng(8)
        n = 14
        c = -np.round(rng.uniform(1, 9, n), 1)
        w = np.round(rng.uniform(1, 9, n), 1)
        m = MilpModel("loose")
        ids = [m.add_variable(f"x{i}", "binary", objective=c[i]) for i in range(n)]
        m.add_constraint("cap", [(ids[i], w[i]) for i in range(n)], "<=", float(w.sum() / 3))
        sol = solve_milp(m, gap=0.25)
        assert sol.status in ("optimal", "feasible-with-gap")
        assert sol.gap <= 0.25 + 1e-9

    def test_exhaustive_agreement_small(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(2, 10))
            rows = int(rng.integers(1, 5))
            A = np.round(rng.uniform(-3, 3, (rows, n)), 1)
            b = np.round(rng.uniform(-1, 5, rows), 1)
            c = np.round(rng.uniform(-4, 4, n), 1)
            rels = rng.choice(["<=", ">=", "="], rows, p=[0.6, 0.3, 0.1])
            m = MilpModel("rb")
            ids = [m.add_variable(f"v{i}", "binary", objective=c[i]) for i in range(n)]
            for i in range(rows):
                m.add_constraint(f"c{i}", [(ids[j], A[i, j]) for j in range(n)],
                                 rels[i], b[i])
            sol = solve_milp(m, gap=0.0)
            pts = np.array(list(itertools.product([0, 1], repeat=n)), float)
            lhs = pts @ A.T
            feas = np.ones(len(pts), bool)
            for i in range(rows):
                if rels[i] == "<=":
                    feas &= lhs[:, i] <= b[i] + 1e-9
                elif rels[i] == ">=":
                    feas &= lhs[:, i] >= b[i] - 1e-9
                else:
                    feas &= np.abs(lhs[:, i] - b[i]) <= 1e-9
            if feas.any():
                best = float((pts[feas] @ c).min())
                assert sol.status == "optimal"
                assert sol.objective == pytest.approx(best, abs=1e-7)
            else:
                assert sol.status == "infeasible"
