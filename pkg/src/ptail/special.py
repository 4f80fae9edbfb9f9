"""Closed-form asymptotic constants and small numerical helpers.

Everything here is a pure function of its arguments. The variance of the
normalized estimator is the delta-method value

    gamma^2 * (Gamma(2p+1) / Gamma(p+1)^2 - 1),

which reduces to the classical Hill variance gamma^2 at p = 1.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

__all__ = [
    "log_gamma",
    "limit_moment",
    "limit_variance",
    "delta_variance",
    "nu_beta",
    "normal_cdf",
    "normal_quantile",
    "VarianceProfile",
]

_NORMAL = statistics.NormalDist()


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")


def limit_moment(gamma: float, p: float) -> float:
    """Limiting value of the power-mean statistic: gamma^p * Gamma(p+1)."""
    _check_positive(gamma=gamma, p=p)
    return gamma**p * math.exp(math.lgamma(p + 1))


def limit_variance(gamma: float, p: float) -> float:
    """Variance of the limiting summand: gamma^(2p) * (Gamma(2p+1) - Gamma(p+1)^2)."""
    _check_positive(gamma=gamma, p=p)
    lg = math.lgamma(p + 1)
    return gamma ** (2 * p) * (math.exp(math.lgamma(2 * p + 1)) - math.exp(2 * lg))


def delta_variance(gamma: float, p: float) -> float:
    """Asymptotic variance of p * sqrt(k) * (gamma_hat - gamma).

    Delta-method value gamma^2 * (Gamma(2p+1)/Gamma(p+1)^2 - 1); equals the
    Hill variance gamma^2 at p = 1.
    """
    _check_positive(gamma=gamma, p=p)
    ratio = math.exp(math.lgamma(2 * p + 1) - 2 * math.lgamma(p + 1))
    return gamma**2 * (ratio - 1.0)


def nu_beta(beta: float | None = None) -> float:
    """Exponent nu_beta = h(max(2, 2*beta)) / beta with h(u) = u - 1 - log(u).

    ``beta=None`` encodes the infinite-beta regime and returns 2 exactly.
    """
    if beta is None:
        return 2.0
    if not math.isfinite(beta):
        raise ValueError("pass beta=None for the infinite regime, not a float sentinel")
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    u = max(2.0, 2.0 * beta)
    return (u - 1.0 - math.log(u)) / beta


def normal_cdf(x: float) -> float:
    """Standard normal distribution function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile(q: float) -> float:
    """Inverse of normal_cdf on (0, 1)."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {q}")
    return _NORMAL.inv_cdf(q)


@dataclass(frozen=True)
class VarianceProfile:
    """All asymptotic constants attached to one (gamma, p) pair."""

    p: float
    gamma: float
    m_p: float
    sigma_sq: float
    delta_var: float

    @classmethod
    def for_params(cls, gamma: float, p: float) -> "VarianceProfile":
        return cls(
            p=p,
            gamma=gamma,
            m_p=limit_moment(gamma, p),
            sigma_sq=limit_variance(gamma, p),
            delta_var=delta_variance(gamma, p),
        )
