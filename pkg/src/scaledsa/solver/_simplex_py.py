"""NumPy simplex kernel.

Dictionary layout: ``T`` has one row per basic variable plus a final
objective row, and one column per nonbasic variable plus a final
right-hand-side column.  Row ``i`` reads

    basis[i] = T[i, -1] - sum_j T[i, j] * nonbasic[j]

and the objective row reads ``z = T[-1, -1] - sum_j T[-1, j] * nonbasic[j]``
(so a negative entry marks an improving column for maximisation).

The arithmetic here is mirrored operation for operation by the compiled
kernel; both must produce bit-identical tableaux.
"""
from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1  # primal: no leaving row; dual: no entering column (infeasible)
LIMIT = 2


def pivot(T, basis, nonbasic, p, q):
    piv = T[p, q]
    rowp = T[p] / piv
    col = T[:, q].copy()
    T -= np.outer(col, rowp)
    T[p] = rowp
    T[:, q] = -col / piv
    T[p, q] = 1.0 / piv
    basis[p], nonbasic[q] = nonbasic[q], basis[p]


def _entering_bland(T, nonbasic, tol):
    m = T.shape[0] - 1
    k = T.shape[1] - 1
    cand = np.flatnonzero(T[m, :k] < -tol)
    if cand.size == 0:
        return -1
    return int(cand[np.argmin(nonbasic[cand])])


def _leaving_ratio(T, basis, q, tol):
    m = T.shape[0] - 1
    k = T.shape[1] - 1
    col = T[:m, q]
    rows = np.flatnonzero(col > tol)
    if rows.size == 0:
        return -1
    rhs = np.maximum(T[rows, k], 0.0)
    ratios = rhs / col[rows]
    best = ratios.min()
    tied = rows[ratios == best]
    return int(tied[np.argmin(basis[tied])])


def primal_loop(T, basis, nonbasic, tol, max_pivots):
    """Primal simplex with Bland's rule from a primal-feasible dictionary."""
    count = 0
    while True:
        q = _entering_bland(T, nonbasic, tol)
        if q < 0:
            return OPTIMAL, count
        if count >= max_pivots:
            return LIMIT, count
        p = _leaving_ratio(T, basis, q, tol)
        if p < 0:
            return UNBOUNDED, count
        pivot(T, basis, nonbasic, p, q)
        count += 1


def dual_loop(T, basis, nonbasic, tol, max_pivots):
    """Dual simplex from a dual-feasible dictionary.

    Leaves on the most negative right-hand side (lowest label on ties) and
    enters by the dual ratio test (lowest label on ties).
    """
    m = T.shape[0] - 1
    k = T.shape[1] - 1
    count = 0
    while True:
        rhs = T[:m, k]
        neg = np.flatnonzero(rhs < -tol)
        if neg.size == 0:
            return OPTIMAL, count
        if count >= max_pivots:
            return LIMIT, count
        worst = rhs[neg].min()
        tied = neg[rhs[neg] == worst]
        p = int(tied[np.argmin(basis[tied])])
        row = T[p, :k]
        cols = np.flatnonzero(row < -tol)
        if cols.size == 0:
            return UNBOUNDED, count
        d = np.maximum(T[m, cols], 0.0)
        ratios = d / -row[cols]
        best = ratios.min()
        tq = cols[ratios == best]
        q = int(tq[np.argmin(nonbasic[tq])])
        pivot(T, basis, nonbasic, p, q)
        count += 1
