"""Worked-example constraints with their known scaling profiles.

Each entry: name -> (constraint, x_set, xi_set, expected (gamma, rho) or
None, reference limit function g*(y, w)).
"""
import math

import numpy as np

from scaledsa.algebra import AlgebraicConstraint, Monomial, SetDescriptor
from scaledsa.harness.benchmarks import norm_components, portfolio_constraint

A_LIN = np.array([1.5, 0.5, 2.0])
B_LIN = np.array([0.7, 1.2])
ELL = 3.0
BILIN = np.array([[1.0, -2.0, 0.5], [0.0, 1.0, 3.0]])  # full row rank
QA = np.array([2.0, 0.5])
QB = np.array([1.0, 3.0])
JOINT_A = np.array([[1.0, 2.0], [0.5, 1.0], [3.0, 0.2]])
JOINT_B = np.array([[1.0, 0.0], [0.3, 2.0], [1.0, 1.0]])


def _e(k, i):
    v = np.zeros(k)
    v[i] = 1.0
    return v


def linear():
    n, m = A_LIN.size, B_LIN.size
    terms = [Monomial(-A_LIN[i], _e(n, i), np.zeros(m)) for i in range(n)]
    terms += [Monomial(B_LIN[j], np.zeros(n), _e(m, j)) for j in range(m)]
    terms.append(Monomial(ELL, np.zeros(n), np.zeros(m)))
    c = AlgebraicConstraint(terms, n, m)
    return c, SetDescriptor.orthant(n), SetDescriptor.orthant(m), (1.0, 1.0), lambda y, w: -A_LIN @ y + B_LIN @ w


def bilinear():
    n, m = BILIN.shape
    terms = [Monomial(BILIN[i, j], _e(n, i), _e(m, j)) for i in range(n) for j in range(m) if BILIN[i, j] != 0]
    terms.append(Monomial(-ELL, np.zeros(n), np.zeros(m)))
    c = AlgebraicConstraint(terms, n, m)
    return c, SetDescriptor.ball(n, 10.0), SetDescriptor.full(m), (-1.0, 0.0), lambda y, w: y @ BILIN @ w - ELL


def quadratic():
    n, m = QA.size, QB.size
    terms = [Monomial(-QA[i], 2 * _e(n, i), np.zeros(m)) for i in range(n)]
    terms += [Monomial(QB[j], np.zeros(n), 2 * _e(m, j)) for j in range(m)]
    terms.append(Monomial(ELL, np.zeros(n), np.zeros(m)))
    c = AlgebraicConstraint(terms, n, m)
    return c, SetDescriptor.orthant(n), SetDescriptor.orthant(m), (1.0, 2.0), \
        lambda y, w: -QA @ y**2 + QB @ w**2


def quadratic_1d():
    """-x^2 + z^2 + 1."""
    c = AlgebraicConstraint.from_arrays([-1.0, 1.0, 1.0], [[2], [0], [0]], [[0], [2], [0]])
    return c, SetDescriptor.orthant(1), SetDescriptor.orthant(1), (1.0, 2.0), lambda y, w: -y[0] ** 2 + w[0] ** 2


def high_order():
    n = 3
    terms = [Monomial(1.0, 3 * _e(n, i), 2 * _e(n, i)) for i in range(n)]
    terms.append(Monomial(-ELL, np.zeros(n), np.zeros(n)))
    c = AlgebraicConstraint(terms, n, n)
    return c, SetDescriptor.box(np.zeros(n), np.full(n, 5.0)), SetDescriptor.full(n), (-2.0 / 3.0, 0.0), \
        lambda y, w: np.sum(w**2 * y**3) - ELL


def mixed_rates():
    """xz - x + z - 1: no balancing exponent."""
    c = AlgebraicConstraint.from_arrays([1.0, -1.0, 1.0, -1.0], [[1], [1], [0], [0]], [[1], [0], [1], [0]])
    return c, SetDescriptor.full(1), SetDescriptor.full(1), None, None


def ball_product():
    """x^T z - 1 = (1 + |x|^2) * (x^T z - 1) / (1 + |x|^2) on a ball."""
    n = 3
    terms = [Monomial(1.0, _e(n, i), _e(n, i)) for i in range(n)]
    terms.append(Monomial(-1.0, np.zeros(n), np.zeros(n)))
    c = AlgebraicConstraint(terms, n, n)
    return c, SetDescriptor.ball(n, 2.0), SetDescriptor.full(n), (-1.0, 0.0), lambda y, w: y @ w - 1.0


def joint_linear_components():
    K, n = JOINT_A.shape
    m = JOINT_B.shape[1]
    comps = []
    for i in range(K):
        terms = [Monomial(-JOINT_A[i, j], _e(n, j), np.zeros(m)) for j in range(n)]
        terms += [Monomial(JOINT_B[i, k], np.zeros(n), _e(m, k)) for k in range(m) if JOINT_B[i, k] != 0]
        comps.append(AlgebraicConstraint(terms, n, m))
    return comps, SetDescriptor.orthant(n), SetDescriptor.orthant(m), (1.0, 1.0), \
        lambda y, w: float(np.max(-JOINT_A @ y + JOINT_B @ w))


def portfolio(n=20, eta=1000.0):
    c = portfolio_constraint(n, eta)
    return c, SetDescriptor.orthant(n), SetDescriptor.orthant(n), (-1.0, 0.0), lambda y, w: y @ w - eta


def norm_opt():
    comps = norm_components()
    return comps, SetDescriptor.orthant(5), SetDescriptor.full(15), (-1.0, 0.0), \
        lambda y, w: float(np.max(w.reshape(3, 5) ** 2 @ (y**2)) - 100.0)


def short_column_dominant():
    """Dominant parts of the log-domain short-column constraint, one per exponential."""
    lower = (math.log(5.0), math.log(15.0))
    x_set = SetDescriptor.box(lower, (np.inf, np.inf))
    c1 = AlgebraicConstraint.from_arrays([1.0, -1.0, -2.0], [[0, 0], [1, 0], [0, 1]], [[1, 0], [0, 0], [0, 0]])
    c2 = AlgebraicConstraint.from_arrays([2.0, -2.0, -2.0], [[0, 0], [1, 0], [0, 1]], [[0, 1], [0, 0], [0, 0]])
    return [c1, c2], x_set, SetDescriptor.full(2), (1.0, 1.0), \
        lambda y, w: max(w[0] - y[0] - 2 * y[1], 2 * w[1] - 2 * y[0] - 2 * y[1])


SINGLE = {
    "linear": linear,
    "bilinear": bilinear,
    "quadratic": quadratic,
    "quadratic_1d": quadratic_1d,
    "high_order": high_order,
    "mixed_rates": mixed_rates,
    "ball_product": ball_product,
    "portfolio": portfolio,
}
JOINT = {
    "joint_linear": joint_linear_components,
    "norm_opt": norm_opt,
    "short_column": short_column_dominant,
}
