"""Scikit-learn compatible front end for the tail-index estimator."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils import check_array

from .estimators import EstimatorConfig, confidence_interval, gamma_hat, make_sample

__all__ = ["TailIndexEstimator"]


class TailIndexEstimator(BaseEstimator):
    """Estimate the tail index of a heavy-tailed sample.

    Parameters
    ----------
    p : float, default=1.0
        Power applied to the log-spacings; p=1 is the Hill estimator.
    k : int or None, default=None
        Number of upper order statistics. None picks n // 10 at fit time.
    ci_level : float or None, default=None
        When set, a Wald confidence interval at this level is fitted too.

    Attributes
    ----------
    gamma_ : float
        Fitted tail index.
    s_value_ : float
        Power mean of the top-k log-spacings.
    k_ : int
        The k actually used.
    ci_lower_, ci_upper_ : float
        Interval bounds; only set when ci_level is given.
    """

    def __init__(self, p: float = 1.0, k: int | None = None, ci_level: float | None = None):
        self.p = p
        self.k = k
        self.ci_level = ci_level

    def fit(self, X, y=None):
        X = check_array(X, ensure_2d=False, dtype=float)
        X = np.ravel(X)
        sample = make_sample(X)
        k = self.k if self.k is not None else max(1, sample.n // 10)
        config = EstimatorConfig(p=self.p, k=k)
        if self.ci_level is not None:
            est = confidence_interval(sample, config, self.ci_level)
            self.ci_lower_ = est.ci_lower
            self.ci_upper_ = est.ci_upper
        else:
            est = gamma_hat(sample, config)
        self.n_ = sample.n
        self.k_ = k
        self.s_value_ = est.s_value
        self.gamma_ = est.gamma_hat
        return self

    def predict(self, X=None):
        """Return the fitted tail index; X is ignored (kept for API symmetry)."""
        if not hasattr(self, "gamma_"):
            raise NotFittedError("call fit before predict")
        return self.gamma_
