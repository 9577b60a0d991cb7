"""Dense two-phase simplex for box-bounded linear programs."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from scaledsa.solver import _kernel
from scaledsa.solver._simplex_py import LIMIT, OPTIMAL

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11


class SolverStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class SolverResult:
    status: SolverStatus
    x_star: np.ndarray
    objective_value: float
    iterations: int
    max_constraint_violation: float
    pivots: int = 0
    n_cuts: int = 0
    trace: list = field(default_factory=list, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is SolverStatus.OPTIMAL


@dataclass
class LinearProgram:
    """``max`` or ``min`` of ``c @ x`` s.t. ``A @ x <= b``, ``lower <= x <= upper``."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sense: str = "max"

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (n,)).copy()
        self.upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (n,)).copy()
        if self.A.shape[0] != self.b.size:
            raise ValueError("row count of A and b differ")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("variable bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound above upper bound")
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")

    @property
    def n(self) -> int:
        return self.c.size

    def violation(self, x) -> float:
        v = 0.0
        if self.b.size:
            v = max(v, float(np.max(self.A @ x - self.b)))
        v = max(v, float(np.max(self.lower - x)), float(np.max(x - self.upper)))
        return max(v, 0.0)


class Tableau:
    """Simplex dictionary over shifted variables ``y = x - lower`` and row slacks.

    Labels ``0..n-1`` are the decision variables, ``n, n+1, ...`` the row
    slacks in insertion order.
    """

    AUX = np.iinfo(np.int64).max  # phase-1 artificial, last in Bland order

    def __init__(self, n: int, A, b, kern=None):
        A = np.asarray(A, dtype=float).reshape(-1, n)
        b = np.asarray(b, dtype=float)
        m = A.shape[0]
        self.n = n
        self.kern = kern or _kernel.kernel()
        self.T = np.zeros((m + 1, n + 1))
        self.T[:m, :n] = A
        self.T[:m, n] = b
        self.basis = np.arange(n, n + m, dtype=np.int64)
        self.nonbasic = np.arange(n, dtype=np.int64)
        self.next_label = n + m
        self.pivots = 0

    @property
    def m(self) -> int:
        return self.T.shape[0] - 1

    def _max_pivots(self) -> int:
        return 50 * (self.T.shape[0] + self.T.shape[1]) + 1000

    def set_objective(self, c) -> None:
        """Write the row for maximising ``c @ y`` in the current dictionary."""
        c = np.asarray(c, dtype=float)
        k = self.T.shape[1] - 1
        row = np.zeros(k + 1)
        nb = self.nonbasic
        dec = nb < self.n
        row[:k][dec] = -c[nb[dec]]
        for i in np.flatnonzero(self.basis < self.n):
            row += c[self.basis[i]] * self.T[i]
        self.T[-1] = row

    def phase_one(self, tol: float = FEAS_TOL) -> SolverStatus:
        """Find a feasible dictionary with the auxiliary-variable method."""
        m, k = self.m, self.T.shape[1] - 1
        if m == 0 or self.T[:m, k].min() >= -tol:
            return SolverStatus.OPTIMAL
        # x0 enters every row with coefficient -1; objective max -x0
        T = np.zeros((m + 1, k + 2))
        T[:, :k] = self.T[:, :k]
        T[:m, k] = -1.0
        T[:, k + 1] = self.T[:, k]
        T[m, :] = 0.0
        T[m, k] = 1.0
        nonbasic = np.append(self.nonbasic, self.AUX).astype(np.int64)
        basis = self.basis.copy()
        rhs = T[:m, k + 1]
        worst = rhs.min()
        tied = np.flatnonzero(rhs == worst)
        p = int(tied[np.argmin(basis[tied])])
        self.kern.pivot(T, basis, nonbasic, p, k)
        code, cnt = self.kern.primal_loop(T, basis, nonbasic, PIVOT_TOL, self._max_pivots())
        self.pivots += cnt + 1
        if code == LIMIT:
            return SolverStatus.NUMERICAL_FAILURE
        if T[m, -1] < -tol:
            return SolverStatus.INFEASIBLE
        hit = np.flatnonzero(basis == self.AUX)
        if hit.size:
            p = int(hit[0])
            cols = np.flatnonzero(np.abs(T[p, :-1]) > PIVOT_TOL)
            if cols.size == 0:
                return SolverStatus.NUMERICAL_FAILURE
            q = int(cols[np.argmin(nonbasic[cols])])
            self.kern.pivot(T, basis, nonbasic, p, q)
            self.pivots += 1
        q = int(np.flatnonzero(nonbasic == self.AUX)[0])
        keep = np.r_[np.arange(q), np.arange(q + 1, k + 2)]
        self.T = np.ascontiguousarray(T[:, keep])
        self.basis = basis
        self.nonbasic = np.ascontiguousarray(nonbasic[np.arange(k + 1) != q])
        self.T[:m, -1] = np.maximum(self.T[:m, -1], 0.0)
        return SolverStatus.OPTIMAL

    def primal(self) -> SolverStatus:
        code, cnt = self.kern.primal_loop(self.T, self.basis, self.nonbasic, PIVOT_TOL, self._max_pivots())
        self.pivots += cnt
        if code == OPTIMAL:
            return SolverStatus.OPTIMAL
        return SolverStatus.NUMERICAL_FAILURE

    def dual(self, max_pivots: int | None = None) -> SolverStatus:
        limit = self._max_pivots() if max_pivots is None else max_pivots
        code, cnt = self.kern.dual_loop(self.T, self.basis, self.nonbasic, FEAS_TOL, limit)
        self.pivots += cnt
        if code == OPTIMAL:
            return SolverStatus.OPTIMAL
        if code == LIMIT:
            return SolverStatus.NUMERICAL_FAILURE
        return SolverStatus.INFEASIBLE

    def add_rows(self, A, b) -> None:
        """Append rows ``A @ y <= b`` written in the current dictionary."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        r = A.shape[0]
        if r == 0:
            return
        m, k = self.m, self.T.shape[1] - 1
        # a_full over all labels; slacks of earlier rows carry zero weight
        nb = self.nonbasic
        new = np.zeros((r, k + 1))
        dec_nb = nb < self.n
        new[:, :k][:, dec_nb] = A[:, nb[dec_nb]]
        rows = np.flatnonzero(self.basis < self.n)
        if rows.size:
            W = A[:, self.basis[rows]]
            new -= W @ self.T[rows]
        new[:, k] += b
        self.T = np.ascontiguousarray(np.vstack([self.T[:m], new, self.T[m:]]))
        self.basis = np.append(self.basis, np.arange(self.next_label, self.next_label + r, dtype=np.int64))
        self.next_label += r

    def solution(self) -> np.ndarray:
        y = np.zeros(self.n)
        dec = self.basis < self.n
        y[self.basis[dec]] = self.T[:-1, -1][dec]
        return y

    def value(self) -> float:
        return float(self.T[-1, -1])


def standardize(lp: LinearProgram):
    """Rows over ``y = x - lower``: original rows then the upper-bound rows."""
    width = lp.upper - lp.lower
    A = np.vstack([lp.A, np.eye(lp.n)])
    b = np.concatenate([lp.b - lp.A @ lp.lower, width])
    sign = 1.0 if lp.sense == "max" else -1.0
    return A, b, sign * lp.c


def solve_lp(lp: LinearProgram, kern=None) -> SolverResult:
    """Two-phase primal simplex with Bland's rule."""
    A, b, c = standardize(lp)
    tab = Tableau(lp.n, A, b, kern)
    status = tab.phase_one()
    if status is SolverStatus.OPTIMAL:
        tab.set_objective(c)
        status = tab.primal()
    return _finish(lp, tab, status, iterations=tab.pivots)


def _finish(lp: LinearProgram, tab: Tableau, status: SolverStatus, iterations: int) -> SolverResult:
    if status is not SolverStatus.OPTIMAL:
        x = np.full(lp.n, np.nan)
        return SolverResult(status, x, float("nan"), iterations, float("inf"), pivots=tab.pivots)
    x = lp.lower + tab.solution()
    x = np.clip(x, lp.lower, lp.upper)
    return SolverResult(status, x, float(lp.c @ x), iterations, lp.violation(x), pivots=tab.pivots)
