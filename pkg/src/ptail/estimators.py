"""Order-statistic machinery and the p-power tail-index estimator.

The core statistic is the p-th power mean of the top-k log-spacings

    S = (1/k) * sum_i (log(X_{n+1-i} / X_{n-k}))^p,  i = 1..k,

and the tail-index estimate is (S / Gamma(p+1))^(1/p). At p = 1 this is the
Hill estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ThresholdError
from .special import delta_variance, normal_quantile

__all__ = [
    "Sample",
    "EstimatorConfig",
    "TailEstimate",
    "HillPlotSeries",
    "LargePSchedule",
    "make_sample",
    "log_spacings",
    "s_n",
    "gamma_hat",
    "confidence_interval",
    "k_sweep",
    "large_p_estimate",
]


@dataclass(frozen=True)
class Sample:
    """Observations sorted ascending. Immutable; safe to share."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EstimatorConfig:
    p: float
    k: int

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"p must be > 0, got {self.p}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class TailEstimate:
    p: float
    k: int
    s_value: float
    gamma_hat: float
    ci_lower: float | None = None
    ci_upper: float | None = None
    ci_level: float | None = None


@dataclass(frozen=True)
class HillPlotSeries:
    """One (k, gamma_hat, 1/gamma_hat) point per k, ascending in k."""

    p: float
    points: list  # of (k, gamma_hat, inv_gamma_hat or None)


@dataclass(frozen=True)
class LargePSchedule:
    """Growing-power schedule p(k) = log(k) / alpha, alpha > 1."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"alpha must be > 1, got {self.alpha}")

    def p_at(self, k: int) -> float:
        return math.log(k) / self.alpha


def make_sample(raw) -> Sample:
    """Sort a raw observation vector into a Sample. Ties are preserved."""
    values = np.asarray(raw, dtype=float)
    if values.ndim != 1 or len(values) < 2:
        raise DataError(f"need a 1-d vector of at least 2 values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise DataError("sample contains non-finite values")
    return Sample(np.sort(values))


def log_spacings(sample: Sample, k: int) -> np.ndarray:
    """Top-k log-spacings log(X_{n+1-i} / X_{n-k}), i = 1..k (descending)."""
    n = sample.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    values = sample.values
    threshold = values[n - 1 - k]
    if not threshold > 0:
        raise ThresholdError(k, threshold)
    top = values[n - k:][::-1]
    return np.log(top) - np.log(threshold)


def s_n(sample: Sample, config: EstimatorConfig) -> float:
    """Power mean of the top-k log-spacings; tied spacings contribute 0."""
    d = log_spacings(sample, config.k)
    return float(np.mean(d**config.p))


def gamma_hat(sample: Sample, config: EstimatorConfig) -> TailEstimate:
    """Tail-index estimate (S / Gamma(p+1))^(1/p)."""
    s = s_n(sample, config)
    p = config.p
    g = (s / math.gamma(p + 1)) ** (1.0 / p)
    return TailEstimate(p=p, k=config.k, s_value=s, gamma_hat=g)


def confidence_interval(sample: Sample, config: EstimatorConfig, level: float) -> TailEstimate:
    """Wald interval from the asymptotic normality of p*sqrt(k)*(gamma_hat - gamma).

    Plug-in variance; the lower bound is deliberately not clamped at zero: a
    negative bound flags an unreliable normal approximation at this (p, k).
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must be in (0, 1), got {level}")
    est = gamma_hat(sample, config)
    z = normal_quantile((1.0 + level) / 2.0)
    half = z * math.sqrt(delta_variance(est.gamma_hat, config.p)) / (
        config.p * math.sqrt(config.k)
    )
    return TailEstimate(
        p=est.p,
        k=est.k,
        s_value=est.s_value,
        gamma_hat=est.gamma_hat,
        ci_lower=est.gamma_hat - half,
        ci_upper=est.gamma_hat + half,
        ci_level=level,
    )


def k_sweep(sample: Sample, p: float, k_min: int, k_max: int) -> HillPlotSeries:
    """Estimates for every k in [k_min, k_max], reusing the single sort."""
    if not p > 0:
        raise ValueError(f"p must be > 0, got {p}")
    n = sample.n
    if not 1 <= k_min <= k_max <= n - 1:
        raise ValueError(
            f"need 1 <= k_min <= k_max <= n-1, got k_min={k_min}, k_max={k_max}, n={n}"
        )
    values = sample.values
    n_nonpos = int(np.searchsorted(values, 0.0, side="right"))
    if n_nonpos > 0:
        first_bad_k = n - n_nonpos
        if first_bad_k <= k_max:
            raise ThresholdError(max(k_min, first_bad_k), values[n - 1 - max(k_min, first_bad_k)])
    log_top = np.log(values[n - 1 - k_max:][::-1])  # k_max+1 largest, descending
    inv_gamma_norm = math.gamma(p + 1)
    points = []
    for k in range(k_min, k_max + 1):
        d = log_top[:k] - log_top[k]
        g = (float(np.mean(d**p)) / inv_gamma_norm) ** (1.0 / p)
        points.append((k, g, 1.0 / g if g > 0 else None))
    return HillPlotSeries(p=p, points=points)


def large_p_estimate(sample: Sample, k: int, schedule: LargePSchedule) -> TailEstimate:
    """Estimate with the scheduled power p = log(k) / alpha."""
    if k < 2:
        raise ValueError(f"k must be >= 2 so the scheduled power is positive, got {k}")
    return gamma_hat(sample, EstimatorConfig(p=schedule.p_at(k), k=k))
