import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ptail.estimators import EstimatorConfig, gamma_hat, make_sample
from ptail.sklearn_api import TailIndexEstimator


def pareto_sample(n=500, gamma=1.0, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(size=n) ** -gamma


def test_fit_matches_functional_core():
    x = pareto_sample()
    est = TailIndexEstimator(p=2.0, k=50).fit(x)
    direct = gamma_hat(make_sample(x), EstimatorConfig(p=2.0, k=50))
    assert est.gamma_ == direct.gamma_hat
    assert est.s_value_ == direct.s_value
    assert est.k_ == 50
    assert est.predict() == est.gamma_


def test_default_k_is_tenth_of_n():
    est = TailIndexEstimator().fit(pareto_sample(n=300))
    assert est.k_ == 30


def test_ci_attributes():
    est = TailIndexEstimator(p=1.0, k=100, ci_level=0.95).fit(pareto_sample(n=2000))
    assert est.ci_lower_ <= est.gamma_ <= est.ci_upper_


def test_get_params_and_clone():
    est = TailIndexEstimator(p=3.0, k=10, ci_level=0.9)
    assert est.get_params() == {"p": 3.0, "k": 10, "ci_level": 0.9}
    twin = clone(est)
    assert twin.get_params() == est.get_params()


def test_predict_before_fit_raises():
    with pytest.raises(NotFittedError):
        TailIndexEstimator().predict()
