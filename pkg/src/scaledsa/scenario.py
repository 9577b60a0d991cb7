"""Sample sizes, the decision-scaling transform, and scenario-problem assembly.

The scenario problem enforces ``g(s**(-gamma) * x, z_j) <= 0`` for every
sampled ``z_j``.  With ``s = 1`` it is the classical scenario program.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from scaledsa.algebra.composition import JointConstraint
from scaledsa.algebra.monomial import AlgebraicConstraint
from scaledsa.algebra.sets import SetDescriptor
from scaledsa.distributions import DistributionSpec, sample

CEIL_RTOL = 1e-12


def _check_unit(name, v):
    if not 0 < v < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {v!r}")


def classical_sample_size(epsilon: float, beta: float, n_dec: int) -> int:
    """``ceil((2/epsilon) * (log(1/beta) + n_dec))``.

    Values within a relative 1e-12 of an integer are rounded to it instead
    of being pushed up by floating-point noise.
    """
    _check_unit("epsilon", epsilon)
    _check_unit("beta", beta)
    if n_dec < 1:
        raise ValueError("decision dimension must be >= 1")
    v = (2.0 / epsilon) * (math.log(1.0 / beta) + n_dec)
    r = round(v)
    if abs(v - r) <= CEIL_RTOL * v:
        return int(r)
    return int(math.ceil(v))


def scaled_epsilon(epsilon: float, s: float, alpha: float) -> float:
    return epsilon ** (1.0 / s**alpha)


def scaled_sample_size(epsilon: float, beta: float, n_dec: int, s: float, alpha: float) -> int:
    if s < 1:
        raise ValueError(f"scaling parameter s must be >= 1, got {s!r}")
    if not alpha > 0:
        raise ValueError("tail index alpha must be positive")
    _check_unit("epsilon", epsilon)
    return classical_sample_size(scaled_epsilon(epsilon, s, alpha), beta, n_dec)


def complexity_ratio(epsilon: float, beta: float, n_dec: int, s: float, alpha: float) -> float:
    """``log N_scaled / log N_classical``; tends to ``1 / s**alpha`` as epsilon -> 0."""
    ns = scaled_sample_size(epsilon, beta, n_dec, s, alpha)
    nc = classical_sample_size(epsilon, beta, n_dec)
    return math.log(ns) / math.log(nc)


def s_from_s_alpha(s_alpha: float, alpha: float) -> float:
    if s_alpha < 1:
        raise ValueError("s**alpha must be >= 1")
    return float(s_alpha ** (1.0 / alpha))


@dataclass(frozen=True)
class SampleSizePlan:
    epsilon: float
    beta: float
    n_dec: int
    s: float
    alpha: float
    N: int

    @classmethod
    def make(cls, epsilon, beta, n_dec, s=1.0, alpha=1.0) -> "SampleSizePlan":
        return cls(float(epsilon), float(beta), int(n_dec), float(s), float(alpha),
                   scaled_sample_size(epsilon, beta, n_dec, s, alpha))

    @property
    def classical(self) -> bool:
        return self.s == 1.0


def scale_monomial_constraint(c, gamma: float, s: float):
    """Exact coefficient form of ``x -> g(s**(-gamma) x, z)``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    return c.scale_decision(s ** (-gamma))


# -- per-scenario constraint blocks ------------------------------------------------

class MonomialBlock:
    """Scenario rows of one algebraic constraint.

    Uncertainty features ``z_j**b_t`` are computed once, so every
    evaluation is a matrix-vector product.
    """

    def __init__(self, constraint: AlgebraicConstraint, Z):
        self.constraint = constraint
        self.Z = np.asarray(Z, dtype=float)
        self.F = constraint.uncertainty_features(self.Z)
        self.n = constraint.n

    def __len__(self):
        return self.F.shape[0]

    def values(self, x) -> np.ndarray:
        return self.F @ self.constraint.decision_weights(x)

    def subgradients(self, x, rows) -> np.ndarray:
        return self.F[rows] @ self.constraint.decision_jacobian(x)


class JointBlock:
    """Rows ``k*K + i`` hold component ``i`` of a joint constraint at scenario ``k``."""

    def __init__(self, blocks):
        self.blocks = list(blocks)
        self.K = len(self.blocks)
        self.n = self.blocks[0].n
        sizes = {len(b) for b in self.blocks}
        if len(sizes) != 1:
            raise ValueError("joint components must share the scenario set")
        self.N = sizes.pop()

    def __len__(self):
        return self.N * self.K

    def values(self, x) -> np.ndarray:
        return np.stack([b.values(x) for b in self.blocks], axis=1).ravel()

    def subgradients(self, x, rows) -> np.ndarray:
        rows = np.asarray(rows)
        out = np.empty((rows.size, self.n))
        comp = rows % self.K
        scen = rows // self.K
        for i, b in enumerate(self.blocks):
            sel = np.flatnonzero(comp == i)
            if sel.size:
                out[sel] = b.subgradients(x, scen[sel])
        return out


class SmoothBlock:
    """Generic evaluator wrapped as ``x -> g(f x, z)`` with chain-rule gradients.

    ``evaluator`` must provide ``batch_values(x, Z)`` and
    ``batch_subgradients(x, Z)``.
    """

    def __init__(self, evaluator, Z, factor: float = 1.0):
        self.evaluator = evaluator
        self.Z = np.asarray(Z, dtype=float)
        self.factor = float(factor)
        self.n = evaluator.n

    def __len__(self):
        return self.Z.shape[0]

    def values(self, x) -> np.ndarray:
        return self.evaluator.batch_values(self.factor * np.asarray(x, float), self.Z)

    def subgradients(self, x, rows) -> np.ndarray:
        xs = self.factor * np.asarray(x, float)
        return self.factor * self.evaluator.batch_subgradients(xs, self.Z[rows])


@dataclass(frozen=True)
class ScenarioProblem:
    objective: np.ndarray
    sense: str
    constraints: Any  # a constraint block
    x_set: SetDescriptor
    lower: np.ndarray
    upper: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("the solver box must be finite")

    @property
    def n(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return len(self.constraints)

    def constraint_values(self, x) -> np.ndarray:
        return self.constraints.values(x)

    def max_violation(self, x) -> float:
        v = self.constraint_values(x)
        return float(max(0.0, v.max())) if v.size else 0.0


def make_block(source, Z, factor: float):
    """Constraint block for ``source`` evaluated at ``factor * x``."""
    if isinstance(source, AlgebraicConstraint):
        return MonomialBlock(source.scale_decision(factor), Z)
    if isinstance(source, JointConstraint):
        return JointBlock([MonomialBlock(c.scale_decision(factor), Z) for c in source.components])
    return SmoothBlock(source, Z, factor)


def build_problem(
    objective,
    source,
    plan: SampleSizePlan | None,
    gamma: float,
    x_set: SetDescriptor,
    box,
    seed: int = 0,
    *,
    sense: str = "max",
    distribution: DistributionSpec | None = None,
    samples=None,
    scale_box: bool = True,
) -> ScenarioProblem:
    """Assemble the decision-scaled scenario program.

    Scenarios are ``samples`` if given, else ``plan.N`` draws from
    ``distribution`` with ``seed``.  When ``x_set`` is a cone the solver
    box is scaled with the feasible set (by ``s**gamma``), so the scaled
    problem is an exact image of the unscaled one.
    """
    s = plan.s if plan is not None else 1.0
    if samples is None:
        if plan is None or distribution is None:
            raise ValueError("need either samples or a plan and a distribution")
        Z = sample(distribution, plan.N, seed).data
    else:
        Z = np.atleast_2d(np.asarray(samples, dtype=float))
    factor = s ** (-gamma)
    block = make_block(source, Z, factor)
    lower, upper = (np.array(v, dtype=float) for v in box)
    if scale_box and x_set.is_cone:
        lower, upper = lower / factor, upper / factor
    meta = {"gamma": gamma, "s": s, "N": Z.shape[0], "seed": seed}
    if plan is not None:
        meta.update(epsilon=plan.epsilon, beta=plan.beta, alpha=plan.alpha)
    return ScenarioProblem(np.asarray(objective, dtype=float), sense, block, x_set, lower, upper, meta)
