"""Bounded-variable primal simplex on a dense tableau.

Two-phase method: artificial variables absorb initial infeasibility, then the
original objective is optimized.  Pricing is Dantzig's rule with a permanent
switch to Bland's rule after a run of degenerate pivots, which guarantees
termination.  All tie-breaks go to the lowest column/variable index, so the
solve is deterministic.  The basis system is re-solved densely every
iteration; problem sizes here stay in the hundreds of rows, where that is
cheap and numerically fresh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LpResult", "simplex_solve"]

_RC_TOL = 1e-9
_PIV_TOL = 1e-9
_DEGENERATE_STEP = 1e-10
_DEGENERATE_LIMIT = 60
_MAX_ITERATIONS = 50_000

_AT_LOWER, _AT_UPPER, _BASIC, _FREE = 0, 1, 2, 3


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray | None
    objective: float
    iterations: int
    infeasible_rows: tuple[int, ...] = ()


def _start_values(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
    status = np.where(np.isfinite(lo), _AT_LOWER,
                      np.where(np.isfinite(hi), _AT_UPPER, _FREE)).astype(np.int8)
    return values, status


class _Tableau:
    def __init__(self, columns: np.ndarray, rhs: np.ndarray,
                 lo: np.ndarray, hi: np.ndarray):
        self.A = columns
        self.b = rhs
        self.lo = lo
        self.hi = hi
        self.m, self.ncols = columns.shape
        self.value, self.status = _start_values(lo, hi)
        self.basis: np.ndarray = np.empty(0, dtype=int)

    def set_basis(self, basis: list[int]) -> None:
        self.basis = np.asarray(basis, dtype=int)
        self.status[self.basis] = _BASIC
        self.refresh_basics()

    def refresh_basics(self) -> None:
        nb_mask = self.status != _BASIC
        resid = self.b - self.A[:, nb_mask] @ self.value[nb_mask]
        self.value[self.basis] = np.linalg.solve(self.A[:, self.basis], resid)

    def iterate(self, c: np.ndarray, iter_budget: int) -> tuple[str, int]:
        """Pivot until optimal/unbounded for objective c. Returns (status, iters)."""
        iters = 0
        degenerate_run = 0
        bland = False
        fixed = (self.hi - self.lo) <= _PIV_TOL
        col_index = np.arange(self.ncols)
        while True:
            if iters >= iter_budget:
                raise RuntimeError("simplex iteration limit exceeded")
            B = self.A[:, self.basis]
            y = np.linalg.solve(B.T, c[self.basis])
            reduced = c - y @ self.A

            open_col = (self.status != _BASIC) & ~fixed
            want_up = open_col & (reduced < -_RC_TOL) & (
                (self.status == _AT_LOWER) | (self.status == _FREE))
            want_dn = open_col & (reduced > _RC_TOL) & (
                (self.status == _AT_UPPER) | (self.status == _FREE))
            eligible = want_up | want_dn
            if not eligible.any():
                return "optimal", iters
            if bland:
                entering = int(col_index[eligible][0])
            else:
                scores = np.where(eligible, np.abs(reduced), -1.0)
                entering = int(np.argmax(scores))  # first max = lowest index
            direction = 1 if want_up[entering] else -1

            w = np.linalg.solve(B, self.A[:, entering])
            delta = -direction * w  # basics move by +t*delta
            vb = self.value[self.basis]
            with np.errstate(invalid="ignore", divide="ignore"):
                t_up = np.where(delta > _PIV_TOL,
                                (self.hi[self.basis] - vb) / np.where(delta > _PIV_TOL, delta, 1.0),
                                math.inf)
                t_dn = np.where(delta < -_PIV_TOL,
                                (vb - self.lo[self.basis]) / np.where(delta < -_PIV_TOL, -delta, 1.0),
                                math.inf)
            ratios = np.minimum(np.maximum(t_up, 0.0), np.maximum(t_dn, 0.0))
            ratios = np.where(np.isnan(ratios), math.inf, ratios)
            span = self.hi[entering] - self.lo[entering]
            t_basic = float(ratios.min()) if self.m else math.inf
            t_best = min(t_basic, span)
            if math.isinf(t_best):
                return "unbounded", iters

            iters += 1
            if t_best <= _DEGENERATE_STEP:
                degenerate_run += 1
                if degenerate_run >= _DEGENERATE_LIMIT:
                    bland = True
            else:
                degenerate_run = 0

            if math.isfinite(span) and span <= t_basic + _PIV_TOL:
                # bound flip: entering runs to its opposite bound, basis unchanged
                self.value[entering] = self.hi[entering] if direction > 0 else self.lo[entering]
                self.status[entering] = _AT_UPPER if direction > 0 else _AT_LOWER
                self.refresh_basics()
                continue

            candidates = np.nonzero(ratios <= t_best + _PIV_TOL)[0]
            # deterministic: among blocking rows pick the lowest variable index
            block_pos = int(candidates[np.argmin(self.basis[candidates])])
            leaving = int(self.basis[block_pos])
            to_upper = delta[block_pos] > 0
            self.basis[block_pos] = entering
            self.status[entering] = _BASIC
            if to_upper:
                self.status[leaving] = _AT_UPPER
                self.value[leaving] = self.hi[leaving]
            else:
                self.status[leaving] = _AT_LOWER
                self.value[leaving] = self.lo[leaving]
            self.refresh_basics()


def simplex_solve(A: np.ndarray, relations: list[str], rhs: np.ndarray,
                  c: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> LpResult:
    """Minimize c'x subject to A x (rel) rhs and lo <= x <= hi.

    Returns structural variable values only.  ``infeasible_rows`` lists the
    0-based indices of constraints whose artificial variables stay positive at
    the phase-1 optimum (an infeasibility certificate for diagnostics).
    """
    m, n = A.shape
    if m == 0:
        return _solve_unconstrained(c, lo, hi, n)

    slack_lo = np.zeros(m)
    slack_hi = np.zeros(m)
    for i, rel in enumerate(relations):
        if rel == "<=":
            slack_lo[i], slack_hi[i] = 0.0, math.inf
        elif rel == ">=":
            slack_lo[i], slack_hi[i] = -math.inf, 0.0
        else:
            slack_lo[i], slack_hi[i] = 0.0, 0.0

    columns = np.hstack([A, np.eye(m)])
    full_lo = np.concatenate([lo, slack_lo])
    full_hi = np.concatenate([hi, slack_hi])

    # Every structural starts nonbasic at a finite bound (or 0 if free).
    start_vals, _ = _start_values(lo, hi)
    slack_start = rhs - A @ start_vals

    art_cols: list[np.ndarray] = []
    art_rows: list[int] = []
    basis: list[int] = []
    n_plain = columns.shape[1]
    for i in range(m):
        v = slack_start[i]
        if slack_lo[i] - _PIV_TOL <= v <= slack_hi[i] + _PIV_TOL:
            basis.append(n + i)
        else:
            bound = slack_lo[i] if v < slack_lo[i] else slack_hi[i]
            sigma = 1.0 if v - bound > 0 else -1.0
            col = np.zeros(m)
            col[i] = sigma
            art_cols.append(col)
            art_rows.append(i)
            basis.append(n_plain + len(art_cols) - 1)

    total_iters = 0
    if art_cols:
        ext = np.hstack([columns, np.column_stack(art_cols)])
        ext_lo = np.concatenate([full_lo, np.zeros(len(art_cols))])
        ext_hi = np.concatenate([full_hi, np.full(len(art_cols), math.inf)])
        tab = _Tableau(ext, rhs, ext_lo, ext_hi)
        tab.set_basis(basis)
        c_phase1 = np.zeros(ext.shape[1])
        c_phase1[n_plain:] = 1.0
        status, iters = tab.iterate(c_phase1, _MAX_ITERATIONS)
        total_iters += iters
        art_values = tab.value[n_plain:]
        if status != "optimal" or art_values.sum() > 1e-7:
            bad = tuple(art_rows[k] for k in range(len(art_cols)) if art_values[k] > 1e-7)
            return LpResult("infeasible", None, math.nan, total_iters, bad)
        # freeze artificials at zero so they can never carry value again
        tab.lo[n_plain:] = 0.0
        tab.hi[n_plain:] = 0.0
    else:
        tab = _Tableau(columns, rhs, full_lo, full_hi)
        tab.set_basis(basis)

    c_phase2 = np.zeros(tab.ncols)
    c_phase2[:n] = c
    status, iters = tab.iterate(c_phase2, _MAX_ITERATIONS - total_iters)
    total_iters += iters
    if status == "unbounded":
        return LpResult("unbounded", None, -math.inf, total_iters)
    x = tab.value[:n].copy()
    return LpResult("optimal", x, float(c @ x), total_iters)


def _solve_unconstrained(c, lo, hi, n) -> LpResult:
    x = np.zeros(n)
    for j in range(n):
        if c[j] > 0:
            if not math.isfinite(lo[j]):
                return LpResult("unbounded", None, -math.inf, 0)
            x[j] = lo[j]
        elif c[j] < 0:
            if not math.isfinite(hi[j]):
                return LpResult("unbounded", None, -math.inf, 0)
            x[j] = hi[j]
        else:
            x[j] = lo[j] if math.isfinite(lo[j]) else (hi[j] if math.isfinite(hi[j]) else 0.0)
    return LpResult("optimal", x, float(c @ x), 0)
