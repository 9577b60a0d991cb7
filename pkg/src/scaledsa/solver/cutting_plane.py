"""Kelley's cutting-plane method for linear objectives under convex scenario constraints."""
from __future__ import annotations

import csv

import numpy as np

from scaledsa.scenario import ScenarioProblem
from scaledsa.solver.lp import LinearProgram, SolverResult, SolverStatus, Tableau

TOL_FEAS = 1e-7
MAX_ITER = 500
TOP_K = 50
RESIDUAL_TOL = 1e-7


def _cold(n, rows_A, rows_b, width, c, kern):
    """Two-phase solve of the current relaxation from scratch."""
    A = np.vstack([np.eye(n)] + rows_A)
    b = np.concatenate([width] + rows_b)
    tab = Tableau(n, A, b, kern)
    st = tab.phase_one()
    if st is SolverStatus.OPTIMAL:
        tab.set_objective(c)
        st = tab.primal()
    return tab, st


def solve_cutting_plane(
    p: ScenarioProblem,
    tol_feas: float = TOL_FEAS,
    max_iter: int = MAX_ITER,
    top_k: int = TOP_K,
    *,
    kern=None,
    trace_path=None,
) -> SolverResult:
    """Solve the scenario program by iterated LP relaxation.

    Each round solves the relaxation (box plus accumulated cuts), evaluates
    every scenario constraint at the LP solution and adds the linearisation
    cuts of the ``top_k`` most violated rows.  Relaxations after the first
    are warm-started with the dual simplex; a cold two-phase solve is the
    fallback.  On the iteration limit the least-violated iterate is
    returned.
    """
    n = p.n
    lower, upper = p.lower, p.upper
    width = upper - lower
    sign = 1.0 if p.sense == "max" else -1.0
    c = sign * p.objective
    tab = Tableau(n, np.eye(n), width, kern)
    tab.set_objective(c)
    status = tab.primal()
    cuts_A: list[np.ndarray] = []
    cuts_b: list[np.ndarray] = []
    trace = []
    best = None  # (violation, x)
    n_cuts = 0
    it = 0
    while status is SolverStatus.OPTIMAL:
        it += 1
        x = np.clip(lower + tab.solution(), lower, upper)
        vals = p.constraint_values(x)
        maxv = float(vals.max()) if vals.size else -np.inf
        viol = max(maxv, 0.0)
        trace.append((it, float(p.objective @ x), viol, n_cuts))
        if best is None or viol < best[0]:
            best = (viol, x)
        if viol <= tol_feas:
            break
        if it >= max_iter:
            status = SolverStatus.ITERATION_LIMIT
            break
        order = np.argsort(-vals, kind="stable")
        rows = order[: min(top_k, int(np.count_nonzero(vals > tol_feas)))]
        G = np.atleast_2d(p.constraints.subgradients(x, rows))
        g = vals[rows]
        scale = np.abs(G).max(axis=1)
        if np.any(scale == 0):
            # a positive constant in a neighbourhood of its minimiser: infeasible everywhere
            status = SolverStatus.INFEASIBLE
            break
        A_new = G / scale[:, None]
        b_new = (G @ (x - lower) - g) / scale
        cuts_A.append(A_new)
        cuts_b.append(b_new)
        n_cuts += rows.size
        tab.add_rows(A_new, b_new)
        status = tab.dual()
        if status is SolverStatus.OPTIMAL and not _consistent(tab, cuts_A, cuts_b, width):
            status = SolverStatus.NUMERICAL_FAILURE
        if status is SolverStatus.NUMERICAL_FAILURE:
            pivots = tab.pivots
            tab, status = _cold(n, cuts_A, cuts_b, width, c, kern)
            tab.pivots += pivots

    if trace_path is not None:
        with open(trace_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "objective", "max_violation", "cuts"])
            w.writerows(trace)

    # the final iterate of an optimal run is also the least violated one
    if status in (SolverStatus.OPTIMAL, SolverStatus.ITERATION_LIMIT):
        return SolverResult(status, best[1], float(p.objective @ best[1]), it, best[0], tab.pivots, n_cuts, trace)
    return SolverResult(status, np.full(n, np.nan), float("nan"), it, float("inf"), tab.pivots, n_cuts, trace)


def _consistent(tab: Tableau, cuts_A, cuts_b, width) -> bool:
    """Recheck the warm-started solution against the stored rows."""
    y = tab.solution()
    if np.any(y < -RESIDUAL_TOL) or np.any(y - width > RESIDUAL_TOL * np.maximum(1.0, width)):
        return False
    for A, b in zip(cuts_A, cuts_b):
        if np.any(A @ y - b > RESIDUAL_TOL * np.maximum(1.0, np.abs(b))):
            return False
    return True


def lp_as_problem(lp: LinearProgram):
    """Scenario-problem view of an LP: each row is one linear 'scenario'."""
    from scaledsa.algebra.sets import SetDescriptor

    return ScenarioProblem(lp.c, lp.sense, _LinearRows(lp.A, lp.b), SetDescriptor.full(lp.n), lp.lower, lp.upper)


class _LinearRows:
    def __init__(self, A, b):
        self.A = np.asarray(A, float)
        self.b = np.asarray(b, float)
        self.n = self.A.shape[1]

    def __len__(self):
        return self.b.size

    def values(self, x):
        return self.A @ x - self.b

    def subgradients(self, x, rows):
        return self.A[rows]

