import math

import numpy as np
import pytest

from scaledsa.distributions import (
    correlated_normal_matrix,
    distribution_from_dict,
    mvlognormal,
    mvnormal,
    sample,
    tail_index_of,
    weibull_from_uniform,
    weibull_iid,
)
from scaledsa.rng import SCENARIOS, VALIDATION, make_rng, trial_seed


def test_streams_are_reproducible_and_distinct():
    a = make_rng(42, SCENARIOS).random(5)
    b = make_rng(42, SCENARIOS).random(5)
    c = make_rng(42, VALIDATION).random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.any(a == c)
    assert trial_seed(10, 3) == 13
    with pytest.raises(ValueError):
        make_rng(-1)


def test_tail_index_registry():
    assert tail_index_of("gaussian") == 2.0
    assert tail_index_of("exponential") == 1.0
    assert tail_index_of("weibull", 0.9) == 0.9
    assert tail_index_of("gaussian", override=1.5) == 1.5
    with pytest.raises(KeyError):
        tail_index_of("cauchy")
    with pytest.raises(ValueError):
        tail_index_of("weibull")


def test_weibull_inverse_cdf():
    # P(X > t) = exp(-(t/scale)^shape) evaluated at u = exp(-1) gives t = scale
    assert weibull_from_uniform(math.exp(-1.0), 0.9, 3.0) == pytest.approx(3.0)
    spec = weibull_iid([0.9, 2.0], [1.0, 5.0])
    assert spec.tail_index == 0.9
    Z = sample(spec, 200_000, 0).data
    assert np.all(Z > 0)
    # Weibull mean scale * Gamma(1 + 1/shape)
    np.testing.assert_allclose(Z.mean(axis=0), [math.gamma(1 + 1 / 0.9), 5 * math.gamma(1.5)], rtol=0.02)


def test_mvnormal_moments():
    cov = np.array([[1.0, 0.5], [0.5, 2.0]])
    Z = sample(mvnormal([1.0, -1.0], cov), 200_000, 1).data
    np.testing.assert_allclose(Z.mean(axis=0), [1.0, -1.0], atol=0.02)
    np.testing.assert_allclose(np.cov(Z.T), cov, atol=0.03)


def test_zero_variance_coordinate_is_constant():
    Z = sample(mvnormal([3.0, 0.0], [[0.0, 0.0], [0.0, 1.0]]), 1000, 0).data
    assert np.all(Z[:, 0] == 3.0)
    with pytest.raises(ValueError):
        mvnormal([0.0, 0.0], [[0.0, 0.5], [0.5, 1.0]])
    with pytest.raises(ValueError):
        mvnormal([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])


def test_lognormal_is_exp_of_normal():
    mean, cov = [6.0, 7.5], [[0.4, 0.2], [0.2, 0.4]]
    a = sample(mvlognormal(mean, cov), 100, 3).data
    b = sample(mvnormal(mean, cov), 100, 3).data
    np.testing.assert_allclose(a, np.exp(b), rtol=1e-15)


def test_correlated_matrix_layout():
    spec = correlated_normal_matrix(5, 3, 0.5)
    cov = spec.params["cov"]
    # entries (0, 2) and (1, 2) share column 2 and are correlated
    assert cov[0 * 5 + 2, 1 * 5 + 2] == 0.5
    assert cov[0 * 5 + 2, 0 * 5 + 3] == 0.0
    np.testing.assert_allclose(spec.params["mean"][:5], np.arange(1, 6) / 5)
    with pytest.raises(ValueError):
        correlated_normal_matrix(2, 3, -0.9)


def test_samples_are_read_only_and_seeded():
    spec = weibull_iid(1.0, 1.0)
    s1, s2 = sample(spec, 10, 5), sample(spec, 10, 5)
    np.testing.assert_array_equal(s1.data, s2.data)
    with pytest.raises(ValueError):
        s1.data[0, 0] = 1.0
    with pytest.raises(ValueError):
        sample(spec, 0, 5)


def test_distribution_from_dict():
    spec = distribution_from_dict({"family": "weibull_iid", "shapes": [1.0, 1.0], "scales": [2.0, 3.0]})
    assert spec.dim == 2 and spec.tail_index == 1.0
    d = spec.to_dict()
    assert distribution_from_dict(d).to_dict() == d
    spec = distribution_from_dict({"family": "mvnormal", "mean": [0.0], "cov": [[1.0]], "alpha": 1.5})
    assert spec.tail_index == 1.5 and spec.tail_index_overridden
    with pytest.raises(ValueError):
        distribution_from_dict({"family": "cauchy"})
    with pytest.raises(ValueError):
        distribution_from_dict({"family": "mvnormal", "mean": [0.0]})
    with pytest.raises(ValueError):
        distribution_from_dict({"mean": [0.0]})


def test_weibull_mean_within_three_standard_errors():
    Z = sample(weibull_iid(0.9, 2.0), 10**6, 0).data[:, 0]
    se = Z.std(ddof=1) / math.sqrt(Z.size)
    assert abs(Z.mean() - 2.0 * math.gamma(1 + 1 / 0.9)) <= 3 * se


def test_smallest_correlated_matrix():
    spec = correlated_normal_matrix(1, 2, 0.5)
    np.testing.assert_array_equal(spec.params["cov"], [[1.0, 0.5], [0.5, 1.0]])
    np.testing.assert_array_equal(spec.params["mean"], [1.0, 1.0])
