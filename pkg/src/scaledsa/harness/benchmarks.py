"""The three benchmark problems: portfolio, short column, norm optimisation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from scaledsa.algebra import (
    AlgebraicConstraint,
    Monomial,
    ScalingProfile,
    SetDescriptor,
    identify_scaling,
    max_combine,
)
from scaledsa.distributions import DistributionSpec, correlated_normal_matrix, mvnormal, weibull_iid
from scaledsa.errors import ProfileMismatchError
from scaledsa.rng import INSTANCE, make_rng

NAMES = ("portfolio", "short_column", "norm_opt")

# portfolio
N_ASSETS = 20
WEIBULL_SHAPE = 0.9
LOSS_THRESHOLD = 1000.0
MU_RANGE = (1.0, 3.0)
SIGMA_RANGE = (2.0, 10.0)

# short column
YIELD_STRESS = 5.0
L_W, L_H = 5.0, 15.0
LOG_LOAD_MEAN = (6.0, 7.5)
LOG_LOAD_COV = ((0.4, 0.2), (0.2, 0.4))
# Upper box in the log domain.  Optimal designs sit near 5..10 and grow
# at most linearly in s, so 40 is never active for s <= 4.
SHORT_COLUMN_UPPER = 40.0

# norm optimisation
NORM_N, NORM_M = 5, 3
NORM_BOUND = 100.0
NORM_ROW_CORR = 0.5
# x_j <= 10 holds as soon as one scenario has |z_ij| >= 1 in every column
NORM_BOX = 10.0


@dataclass(frozen=True)
class BenchmarkInstance:
    name: str
    objective: np.ndarray
    sense: str
    constraint: Any  # unscaled constraint source; also the validation evaluator
    distribution: DistributionSpec
    x_set: SetDescriptor
    xi_set: SetDescriptor
    lower: np.ndarray
    upper: np.ndarray
    instance_seed: int
    gamma: float
    rho: float
    alpha: float
    profile: ScalingProfile | None = None
    notes: str = ""

    @property
    def n(self) -> int:
        return self.objective.size

    @property
    def box(self):
        return self.lower, self.upper


def portfolio_constraint(n: int = N_ASSETS, eta: float = LOSS_THRESHOLD) -> AlgebraicConstraint:
    """``x^T z - eta``."""
    eye = np.eye(n)
    terms = [Monomial(1.0, eye[i], eye[i]) for i in range(n)]
    terms.append(Monomial(-eta, np.zeros(n), np.zeros(n)))
    return AlgebraicConstraint(terms, n, n)


def portfolio_instance(instance_seed: int = 0, *, verify: bool = True) -> BenchmarkInstance:
    """Weibull-loss portfolio: max mu^T x s.t. P(x^T z > eta) <= eps, x >= 0.

    ``mu`` and the Weibull scales are drawn once from the instance stream.
    The box edge is ``eta / min(sigma)``: a scenario set of any useful size
    pins every ``x_i`` far below it.
    """
    rng = make_rng(instance_seed, INSTANCE)
    mu = rng.uniform(*MU_RANGE, size=N_ASSETS)
    sigma = rng.uniform(*SIGMA_RANGE, size=N_ASSETS)
    c = portfolio_constraint()
    x_set = SetDescriptor.orthant(N_ASSETS)
    xi_set = SetDescriptor.orthant(N_ASSETS)
    dist = weibull_iid(np.full(N_ASSETS, WEIBULL_SHAPE), sigma)
    profile = _verified(c, x_set, xi_set, -1.0, 0.0) if verify else None
    edge = LOSS_THRESHOLD / sigma.min()
    return BenchmarkInstance(
        "portfolio", mu, "max", c, dist, x_set, xi_set,
        np.zeros(N_ASSETS), np.full(N_ASSETS, edge), instance_seed,
        -1.0, 0.0, dist.tail_index, profile,
        notes=f"box [0, {edge:.6g}]^{N_ASSETS}",
    )


def norm_components(n: int = NORM_N, m: int = NORM_M, bound: float = NORM_BOUND) -> list[AlgebraicConstraint]:
    """``sum_j z_ij^2 x_j^2 - bound`` for each row i; z flattened row-major."""
    comps = []
    for i in range(m):
        terms = []
        for j in range(n):
            a = np.zeros(n)
            a[j] = 2.0
            b = np.zeros(n * m)
            b[i * n + j] = 2.0
            terms.append(Monomial(1.0, a, b))
        terms.append(Monomial(-bound, np.zeros(n), np.zeros(n * m)))
        comps.append(AlgebraicConstraint(terms, n, n * m))
    return comps


def norm_instance(instance_seed: int = 0, *, verify: bool = True) -> BenchmarkInstance:
    comps = norm_components()
    x_set = SetDescriptor.orthant(NORM_N)
    xi_set = SetDescriptor.full(NORM_N * NORM_M)
    if verify:
        profiles = [_verified(c, x_set, xi_set, -1.0, 0.0) for c in comps]
    else:
        from scaledsa.algebra import candidate_profile

        profiles = [candidate_profile(c, -1.0) for c in comps]
    joint = max_combine(comps, profiles)
    dist = correlated_normal_matrix(NORM_N, NORM_M, NORM_ROW_CORR)
    return BenchmarkInstance(
        "norm_opt", np.ones(NORM_N), "max", joint, dist, x_set, xi_set,
        np.zeros(NORM_N), np.full(NORM_N, NORM_BOX), instance_seed,
        -1.0, 0.0, dist.tail_index, joint.profile,
        notes=f"box [0, {NORM_BOX:g}]^{NORM_N}",
    )


class ShortColumnConstraint:
    """Short-column failure constraint in the log domain.

    ``g(x, z) = (4/C_Y) exp(z_M - x_w - 2 x_h) + C_Y**-2 exp(2 z_F - 2 x_w - 2 x_h) - 1``,
    nonpositive exactly when the original stress ratio is at most one.
    """

    n = 2
    m = 2

    def __init__(self, yield_stress: float = YIELD_STRESS):
        self.yield_stress = float(yield_stress)
        self.c1 = math.log(4.0 / yield_stress)
        self.c2 = math.log(1.0 / yield_stress**2)

    def _exps(self, x, Z):
        x = np.asarray(x, float)
        Z = np.atleast_2d(np.asarray(Z, float))
        e1 = np.exp(self.c1 + Z[:, 0] - x[0] - 2.0 * x[1])
        e2 = np.exp(self.c2 + 2.0 * Z[:, 1] - 2.0 * x[0] - 2.0 * x[1])
        return e1, e2

    def batch_values(self, x, Z) -> np.ndarray:
        e1, e2 = self._exps(x, Z)
        return e1 + e2 - 1.0

    def batch_subgradients(self, x, Z) -> np.ndarray:
        e1, e2 = self._exps(x, Z)
        return np.stack([-e1 - 2.0 * e2, -2.0 * e1 - 2.0 * e2], axis=1)

    def evaluate(self, x, z) -> float:
        return float(self.batch_values(x, np.asarray(z, float)[None, :])[0])

    __call__ = evaluate

    def subgradient(self, x, z) -> np.ndarray:
        return self.batch_subgradients(x, np.asarray(z, float)[None, :])[0]

    def log_form(self, x, z) -> float:
        """Log-sum-exp form ``log(e1 + e2)``; same sign as ``evaluate``."""
        x = np.asarray(x, float)
        z = np.asarray(z, float)
        a1 = self.c1 + z[0] - x[0] - 2.0 * x[1]
        a2 = self.c2 + 2.0 * z[1] - 2.0 * x[0] - 2.0 * x[1]
        return float(np.logaddexp(a1, a2))

    @staticmethod
    def dominant(y, w) -> float:
        """Piecewise-linear limit ``max(w_M - y_w - 2 y_h, 2 w_F - 2 y_w - 2 y_h)``."""
        return float(max(w[0] - y[0] - 2.0 * y[1], 2.0 * w[1] - 2.0 * y[0] - 2.0 * y[1]))


def short_column_profile() -> ScalingProfile:
    return ScalingProfile(1.0, 1.0, (0, 1), None, limit_fn=ShortColumnConstraint.dominant,
                          flags=("log_sum_exp",))


def short_column_instance(instance_seed: int = 0) -> BenchmarkInstance:
    """Minimise ``x_w + x_h`` in the log domain under lognormal loads."""
    lower = np.array([math.log(L_W), math.log(L_H)])
    x_set = SetDescriptor.box(lower, np.full(2, np.inf))
    return BenchmarkInstance(
        "short_column", np.ones(2), "min", ShortColumnConstraint(), mvnormal(LOG_LOAD_MEAN, LOG_LOAD_COV),
        x_set, SetDescriptor.full(2), lower, np.full(2, SHORT_COLUMN_UPPER), instance_seed,
        1.0, 1.0, 2.0, short_column_profile(),
        notes=f"upper box {SHORT_COLUMN_UPPER:g} in the log domain",
    )


def _verified(c, x_set, xi_set, gamma, rho) -> ScalingProfile:
    ident = identify_scaling(c, x_set, xi_set)
    if not ident or abs(ident.profile.gamma - gamma) > 1e-12 or abs(ident.profile.rho - rho) > 1e-12:
        got = None if not ident else (ident.profile.gamma, ident.profile.rho)
        raise ProfileMismatchError(f"identified profile {got} differs from declared ({gamma}, {rho})")
    return ident.profile


def make_instance(name: str, instance_seed: int = 0, *, verify: bool = True) -> BenchmarkInstance:
    if name == "portfolio":
        return portfolio_instance(instance_seed, verify=verify)
    if name == "short_column":
        return short_column_instance(instance_seed)
    if name in ("norm_opt", "norm"):
        return norm_instance(instance_seed, verify=verify)
    raise ValueError(f"unknown benchmark {name!r}; expected one of {', '.join(NAMES)}")


__all__ = [
    "NAMES",
    "BenchmarkInstance",
    "ShortColumnConstraint",
    "make_instance",
    "norm_components",
    "norm_instance",
    "portfolio_constraint",
    "portfolio_instance",
    "short_column_instance",
    "short_column_profile",
]
