# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled simplex kernel; same dictionary layout and arithmetic as _simplex_py."""
import numpy as np

cdef int OPTIMAL = 0
cdef int UNBOUNDED = 1
cdef int LIMIT = 2


cdef void _pivot(double[:, ::1] T, long long[::1] basis, long long[::1] nonbasic,
                 Py_ssize_t p, Py_ssize_t q, double[::1] rowp) noexcept nogil:
    cdef Py_ssize_t nr = T.shape[0], nc = T.shape[1], r, j
    cdef double piv = T[p, q], f
    cdef long long t
    for j in range(nc):
        rowp[j] = T[p, j] / piv
    for r in range(nr):
        if r == p:
            continue
        f = T[r, q]
        if f != 0.0:
            for j in range(nc):
                T[r, j] = T[r, j] - f * rowp[j]
            T[r, q] = -f / piv
        else:
            T[r, q] = -f / piv
    for j in range(nc):
        T[p, j] = rowp[j]
    T[p, q] = 1.0 / piv
    t = basis[p]
    basis[p] = nonbasic[q]
    nonbasic[q] = t


def pivot(double[:, ::1] T, long long[::1] basis, long long[::1] nonbasic, Py_ssize_t p, Py_ssize_t q):
    cdef double[::1] rowp = np.empty(T.shape[1])
    _pivot(T, basis, nonbasic, p, q, rowp)


cdef Py_ssize_t _entering_bland(double[:, ::1] T, long long[::1] nonbasic, double tol) noexcept nogil:
    cdef Py_ssize_t m = T.shape[0] - 1, k = T.shape[1] - 1, j, best = -1
    for j in range(k):
        if T[m, j] < -tol and (best < 0 or nonbasic[j] < nonbasic[best]):
            best = j
    return best


cdef Py_ssize_t _leaving_ratio(double[:, ::1] T, long long[::1] basis, Py_ssize_t q, double tol) noexcept nogil:
    cdef Py_ssize_t m = T.shape[0] - 1, k = T.shape[1] - 1, i, best = -1
    cdef double a, rhs, ratio, bestr = 0.0
    for i in range(m):
        a = T[i, q]
        if a > tol:
            rhs = T[i, k]
            if rhs < 0.0:
                rhs = 0.0
            ratio = rhs / a
            if best < 0 or ratio < bestr or (ratio == bestr and basis[i] < basis[best]):
                best = i
                bestr = ratio
    return best


def primal_loop(double[:, ::1] T, long long[::1] basis, long long[::1] nonbasic, double tol, long long max_pivots):
    cdef long long count = 0
    cdef Py_ssize_t p, q
    cdef double[::1] rowp = np.empty(T.shape[1])
    cdef int code
    with nogil:
        while True:
            q = _entering_bland(T, nonbasic, tol)
            if q < 0:
                code = OPTIMAL
                break
            if count >= max_pivots:
                code = LIMIT
                break
            p = _leaving_ratio(T, basis, q, tol)
            if p < 0:
                code = UNBOUNDED
                break
            _pivot(T, basis, nonbasic, p, q, rowp)
            count += 1
    return code, count


def dual_loop(double[:, ::1] T, long long[::1] basis, long long[::1] nonbasic, double tol, long long max_pivots):
    cdef Py_ssize_t m = T.shape[0] - 1, k = T.shape[1] - 1, i, j, p, q
    cdef long long count = 0
    cdef double worst, a, d, ratio, bestr
    cdef double[::1] rowp = np.empty(T.shape[1])
    cdef int code
    with nogil:
        while True:
            p = -1
            worst = 0.0
            for i in range(m):
                if T[i, k] < -tol:
                    if p < 0 or T[i, k] < worst or (T[i, k] == worst and basis[i] < basis[p]):
                        p = i
                        worst = T[i, k]
            if p < 0:
                code = OPTIMAL
                break
            if count >= max_pivots:
                code = LIMIT
                break
            q = -1
            bestr = 0.0
            for j in range(k):
                a = T[p, j]
                if a < -tol:
                    d = T[m, j]
                    if d < 0.0:
                        d = 0.0
                    ratio = d / -a
                    if q < 0 or ratio < bestr or (ratio == bestr and nonbasic[j] < nonbasic[q]):
                        q = j
                        bestr = ratio
            if q < 0:
                code = UNBOUNDED
                break
            _pivot(T, basis, nonbasic, p, q, rowp)
            count += 1
    return code, count
