"""Uncertainty distributions, their tail indices, and reproducible sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from scaledsa.rng import SCENARIOS, make_rng

SYM_TOL = 1e-12
JITTER = 1e-10

# Tail index of the negative log-density's radial growth, per family.
_TAIL_INDEX = {
    "chi_squared": 1.0,
    "erlang": 1.0,
    "exponential": 1.0,
    "gamma": 1.0,
    "inverse_gaussian": 1.0,
    "laplace": 1.0,
    "chi": 2.0,
    "gaussian": 2.0,
    "normal": 2.0,
    "mvnormal": 2.0,
    "gaussian_mixture": 2.0,
    "maxwell_boltzmann": 2.0,
    "rayleigh": 2.0,
    "mvlognormal": 2.0,  # Gaussian in the log domain
}
_SHAPE_FAMILIES = {"weibull", "weibull_iid", "generalized_gamma", "generalized_gaussian"}


def tail_index_of(family: str, shape: float | None = None, override: float | None = None) -> float:
    """Registry lookup of the tail index alpha.

    Shape-parameterised families (Weibull, generalized gamma/gaussian) have
    ``alpha = shape``.  An explicit ``override`` wins over the registry.
    """
    if override is not None:
        if not override > 0:
            raise ValueError("tail index override must be positive")
        return float(override)
    key = family.lower().replace("-", "_").replace(" ", "_")
    if key in _SHAPE_FAMILIES:
        if shape is None or not shape > 0:
            raise ValueError(f"family {family!r} needs a positive shape parameter")
        return float(shape)
    try:
        return _TAIL_INDEX[key]
    except KeyError:
        raise KeyError(f"unknown distribution family {family!r}; supply a tail-index override") from None


class Family(str, Enum):
    WEIBULL_IID = "weibull_iid"
    MVNORMAL = "mvnormal"
    MVLOGNORMAL = "mvlognormal"


@dataclass(frozen=True)
class DistributionSpec:
    family: Family
    params: dict = field(hash=False)
    dim: int
    tail_index: float
    tail_index_overridden: bool = False

    @property
    def support_kind(self) -> str:
        return "nonneg_orthant" if self.family in (Family.WEIBULL_IID, Family.MVLOGNORMAL) else "full_space"

    def to_dict(self) -> dict:
        d = {"family": self.family.value}
        for k, v in self.params.items():
            d[k] = np.asarray(v).tolist()
        if self.tail_index_overridden:
            d["alpha"] = self.tail_index
        return d


def weibull_iid(shapes, scales, alpha: float | None = None) -> DistributionSpec:
    shapes = np.atleast_1d(np.asarray(shapes, dtype=float))
    scales = np.atleast_1d(np.asarray(scales, dtype=float))
    shapes, scales = np.broadcast_arrays(shapes, scales)
    if np.any(shapes <= 0) or np.any(scales <= 0):
        raise ValueError("Weibull shapes and scales must be positive")
    # the joint tail is governed by the heaviest marginal
    a = tail_index_of("weibull", float(shapes.min()), alpha)
    return DistributionSpec(Family.WEIBULL_IID, {"shapes": shapes.copy(), "scales": scales.copy()},
                            shapes.size, a, alpha is not None)


def _factor(cov: np.ndarray) -> np.ndarray:
    """Lower factor L with L @ L.T ~= cov.

    Coordinates with exactly zero variance are left out of the
    factorisation (their rows of L are zero).  The remaining block is
    Cholesky-factored, retrying once with ``JITTER`` on the diagonal for
    semidefinite input.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if not np.allclose(cov, cov.T, rtol=0, atol=SYM_TOL):
        raise ValueError("covariance must be symmetric")
    d = cov.shape[0]
    live = np.flatnonzero(np.diag(cov) != 0)
    L = np.zeros((d, d))
    if live.size == 0:
        return L
    if np.any(cov[np.setdiff1d(np.arange(d), live), :] != 0):
        raise ValueError("covariance is not positive semidefinite")
    sub = cov[np.ix_(live, live)]
    try:
        Ls = np.linalg.cholesky(sub)
    except np.linalg.LinAlgError:
        try:
            Ls = np.linalg.cholesky(sub + JITTER * np.eye(live.size))
        except np.linalg.LinAlgError:
            raise ValueError("covariance is not positive semidefinite") from None
    L[np.ix_(live, live)] = Ls
    return L


def mvnormal(mean, cov, alpha: float | None = None) -> DistributionSpec:
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if cov.shape != (mean.size, mean.size):
        raise ValueError("mean and covariance sizes differ")
    L = _factor(cov)
    return DistributionSpec(Family.MVNORMAL, {"mean": mean, "cov": cov, "chol": L},
                            mean.size, tail_index_of("gaussian", override=alpha), alpha is not None)


def mvlognormal(log_mean, log_cov, alpha: float | None = None) -> DistributionSpec:
    base = mvnormal(log_mean, log_cov)
    return DistributionSpec(Family.MVLOGNORMAL, dict(base.params), base.dim,
                            tail_index_of("mvlognormal", override=alpha), alpha is not None)


def correlated_normal_matrix(n: int, m: int, row_corr: float, alpha: float | None = None) -> DistributionSpec:
    """Normal law of an m-by-n random matrix, flattened row-major.

    Entry (i, j) (1-based j) has mean j/n and unit variance; entries in the
    same column are correlated with ``row_corr``; different columns are
    independent.
    """
    if m > 1 and not (-1.0 / (m - 1) <= row_corr <= 1.0):
        raise ValueError(f"row correlation {row_corr} gives a non-PSD column block")
    mean = np.tile(np.arange(1, n + 1) / n, m)
    cov = np.zeros((m * n, m * n))
    idx = np.arange(m * n)
    same_col = (idx[:, None] % n) == (idx[None, :] % n)
    cov[same_col] = row_corr
    np.fill_diagonal(cov, 1.0)
    return mvnormal(mean, cov, alpha)


def weibull_from_uniform(u, shape, scale):
    """Inverse-CDF transform ``scale * (-log u)**(1/shape)`` for ``u`` in (0, 1]."""
    return scale * np.power(-np.log(u), 1.0 / shape)


@dataclass(frozen=True)
class SampleBatch:
    data: np.ndarray
    seed: int
    count: int


def draw(spec: DistributionSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` rows from an existing generator."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    p = spec.params
    if spec.family is Family.WEIBULL_IID:
        # 1 - U lies in (0, 1], keeping -log finite
        u = 1.0 - rng.random((count, spec.dim))
        return weibull_from_uniform(u, p["shapes"], p["scales"])
    g = rng.standard_normal((count, spec.dim))
    x = g @ p["chol"].T + p["mean"]
    if spec.family is Family.MVLOGNORMAL:
        return np.exp(x)
    return x


def sample(spec: DistributionSpec, count: int, seed: int, stream: int = SCENARIOS) -> SampleBatch:
    if count < 1:
        raise ValueError("count must be >= 1")
    data = draw(spec, count, make_rng(seed, stream))
    data.setflags(write=False)
    return SampleBatch(data, int(seed), int(count))


def distribution_from_dict(d: dict) -> DistributionSpec:
    """Build a spec from a config table: ``family`` plus its parameters and optional ``alpha``."""
    d = dict(d)
    try:
        family = str(d.pop("family")).lower()
    except KeyError:
        raise ValueError("distribution table needs a 'family'") from None
    alpha = d.pop("alpha", None)
    builders = {
        "weibull_iid": (weibull_iid, ("shapes", "scales")),
        "mvnormal": (mvnormal, ("mean", "cov")),
        "mvlognormal": (mvlognormal, ("log_mean", "log_cov")),
        "correlated_normal_matrix": (correlated_normal_matrix, ("n", "m", "row_corr")),
    }
    if family not in builders:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(builders)}")
    fn, keys = builders[family]
    missing = [k for k in keys if k not in d]
    extra = set(d) - set(keys)
    if missing or extra:
        raise ValueError(f"{family} takes parameters {', '.join(keys)}"
                         + (f"; missing {', '.join(missing)}" if missing else "")
                         + (f"; unknown {', '.join(sorted(extra))}" if extra else ""))
    return fn(*(d[k] for k in keys), alpha=alpha)
