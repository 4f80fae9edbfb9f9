"""Synthetic Pareto-type quantile models and their moment oracles.

Four families of quantile functions Q(1-s) = s^(-gamma) * l(s):

* ``strict-pareto``  l = 1
* ``exp-pareto``     Pareto tail glued continuously to an exponential body
                     at s = 0.1
* ``exp-pareto-log`` same gluing with an extra (log 1/s)^3 slowly varying
                     factor in the tail
* ``hall``           l(s) = c + s^delta

Sampling is inverse-transform from counter-based uniform streams, so every
draw is a pure function of (master_seed, stream_path) and independent of
thread scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DataError, QuadratureError
from .estimators import Sample
from .special import limit_moment

__all__ = [
    "QuantileModel",
    "RandomStream",
    "OracleResult",
    "BoundCell",
    "BoundCheckReport",
    "quantile_eval",
    "y_value",
    "draw_sample",
    "draw_y",
    "y_moment",
    "m_bound_check",
    "parse_model_spec",
]

STRICT_PARETO = "strict-pareto"
EXP_PARETO = "exp-pareto"
EXP_PARETO_LOG = "exp-pareto-log"
HALL = "hall"

_VARIANTS = (STRICT_PARETO, EXP_PARETO, EXP_PARETO_LOG, HALL)
_LOG10 = math.log(10.0)
_SPLIT = 0.1  # gluing point of the mixture models


@dataclass(frozen=True)
class QuantileModel:
    variant: str
    gamma: float
    c: float = 1.0
    delta: float | None = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown model variant {self.variant!r}; choose from {_VARIANTS}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.variant == HALL:
            if not self.c > 0:
                raise ValueError(f"c must be > 0, got {self.c}")
            if self.delta is None or not self.delta > 0:
                raise ValueError(f"hall model needs delta > 0, got {self.delta}")


@dataclass(frozen=True)
class RandomStream:
    """Counter-based uniform source: Philox keyed by (master_seed, stream_path).

    Draws of exactly 0 or 1 cannot occur: 53-bit integers are mapped through
    (i + 0.5) / 2^53, which lands strictly inside (0, 1).
    """

    master_seed: int
    stream_path: tuple = ()

    def child(self, *indices: int) -> "RandomStream":
        return RandomStream(self.master_seed, self.stream_path + tuple(indices))

    def _generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_path)
        return np.random.Generator(np.random.Philox(seq))

    def uniforms(self, size: int | None = None):
        raw = self._generator().integers(0, 1 << 53, size=size)
        return (raw + 0.5) / float(1 << 53)


@dataclass(frozen=True)
class OracleResult:
    p: float
    v: float
    m_pv: float
    sigma_pv: float
    quad_error: float


@dataclass(frozen=True)
class BoundCell:
    v: float
    p: float
    lhs: float
    rhs: float
    passed: bool


@dataclass(frozen=True)
class BoundCheckReport:
    model: QuantileModel
    grid: list
    k1: float = 1.0

    @property
    def all_pass(self) -> bool:
        return all(cell.passed for cell in self.grid)


def _quantile_array(model: QuantileModel, s: np.ndarray) -> np.ndarray:
    g = model.gamma
    if model.variant == STRICT_PARETO:
        return s**-g
    if model.variant == HALL:
        return s**-g * (model.c + s**model.delta)
    log_inv = -np.log(s)
    if model.variant == EXP_PARETO:
        return np.where(s <= _SPLIT, s**-g, (10.0**g / _LOG10) * log_inv)
    # EXP_PARETO_LOG
    return np.where(s <= _SPLIT, s**-g * log_inv**3, 10.0**g * _LOG10**2 * log_inv)


def quantile_eval(model: QuantileModel, s: float) -> float:
    """Q(1 - s) for s in (0, 1)."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must be in (0, 1), got {s}")
    return float(_quantile_array(model, np.asarray(s, dtype=float)))


def y_value(model: QuantileModel, v: float, u: float) -> float:
    """Deterministic transform behind draw_y: log(Q(1-uv)/Q(1-v)); v=0 gives -gamma*log(u)."""
    if not 0.0 <= v < 1.0:
        raise ValueError(f"v must be in [0, 1), got {v}")
    if v == 0.0:
        return -model.gamma * math.log(u)
    return math.log(quantile_eval(model, u * v)) - math.log(quantile_eval(model, v))


def draw_sample(model: QuantileModel, n: int, stream: RandomStream) -> Sample:
    """n iid inverse-transform draws, returned sorted ascending."""
    if n < 2:
        raise DataError(f"need n >= 2, got {n}")
    s = stream.uniforms(n)
    return Sample(np.sort(_quantile_array(model, s)))


def draw_y(model: QuantileModel, v: float, stream: RandomStream) -> float:
    """One draw of the log-ratio variable at level v; always >= 0."""
    if not 0.0 <= v < 1.0:
        raise ValueError(f"v must be in [0, 1), got {v}")
    return y_value(model, v, float(stream.uniforms()))


def _mixture_breakpoints(model: QuantileModel, v: float) -> list[float]:
    # The mixture models have a kink where u*v crosses the gluing point.
    if model.variant in (EXP_PARETO, EXP_PARETO_LOG) and v > _SPLIT:
        return [math.log(v / _SPLIT)]
    return []


def _log_quantile(model: QuantileModel, s: float) -> float:
    """log Q(1-s), evaluated directly so tiny s cannot overflow Q itself."""
    g = model.gamma
    if model.variant == STRICT_PARETO:
        return -g * math.log(s)
    if model.variant == HALL:
        return -g * math.log(s) + math.log(model.c + s**model.delta)
    log_inv = -math.log(s)
    if model.variant == EXP_PARETO:
        if s <= _SPLIT:
            return -g * math.log(s)
        return g * _LOG10 - math.log(_LOG10) + math.log(log_inv)
    # EXP_PARETO_LOG
    if s <= _SPLIT:
        return -g * math.log(s) + 3.0 * math.log(log_inv)
    return g * _LOG10 + 2.0 * math.log(_LOG10) + math.log(log_inv)


def _moment_quad(model: QuantileModel, p: float, v: float) -> tuple[float, float]:
    # m_p(v) = int_0^1 (log(Q(1-uv)/Q(1-v)))^p du, after u = exp(-t).
    log_qv = _log_quantile(model, v)

    def integrand(t: float) -> float:
        s = v * math.exp(-t)
        if s <= 0.0:  # underflow far in the tail; the e^{-t} weight is 0 there too
            return 0.0
        y = _log_quantile(model, s) - log_qv
        return y**p * math.exp(-t)

    pieces = [0.0] + _mixture_breakpoints(model, v) + [math.inf]
    total, err = 0.0, 0.0
    for lo, hi in zip(pieces, pieces[1:]):
        val, est = quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=300)
        total += val
        err += est
    return total, err


def y_moment(model: QuantileModel, p: float, v: float) -> OracleResult:
    """Quadrature oracle for the mean and standard deviation of Y(v)^p."""
    if not p > 0:
        raise ValueError(f"p must be > 0, got {p}")
    if not 0.0 < v < 1.0:
        raise ValueError(f"v must be in (0, 1), got {v}")
    m1, e1 = _moment_quad(model, p, v)
    m2, e2 = _moment_quad(model, 2.0 * p, v)
    err = e1 + e2
    if err > max(1e-8 * max(abs(m1), abs(m2)), 1e-9):
        raise QuadratureError(
            f"moment quadrature did not converge at p={p}, v={v}", achieved_error=err
        )
    sigma_sq = m2 - m1 * m1
    return OracleResult(p=p, v=v, m_pv=m1, sigma_pv=math.sqrt(max(sigma_sq, 0.0)), quad_error=err)


def m_bound_check(model: QuantileModel, p_list, v_list) -> BoundCheckReport:
    """Check |m_p(v) - m_p| against 2*K1*(a(v)/l(v))*gamma^(p-1)*Gamma(p+1).

    Only the hall family has the explicit second-order scale a(v) = v^delta,
    for which K1 = 1 exactly: |(uv)^delta - v^delta| / v^delta = 1 - u^delta <= 1.
    """
    if model.variant != HALL:
        raise ValueError(f"bound check needs the hall model, got {model.variant!r}")
    k1 = 1.0
    g, c, delta = model.gamma, model.c, model.delta
    grid = []
    for p in p_list:
        rhs_const = 2.0 * k1 * g ** (p - 1) * math.gamma(p + 1)
        for v in v_list:
            res = y_moment(model, p, v)
            lhs = abs(res.m_pv - limit_moment(g, p))
            rhs = rhs_const * v**delta / (c + v**delta)
            passed = lhs <= rhs + 10.0 * res.quad_error + 1e-12
            grid.append(BoundCell(v=v, p=p, lhs=lhs, rhs=rhs, passed=passed))
    return BoundCheckReport(model=model, grid=grid, k1=k1)


def parse_model_spec(text: str) -> QuantileModel:
    """Parse CLI model strings like ``hall:gamma=1.0,c=1.0,delta=0.5``."""
    name, _, params_part = text.strip().partition(":")
    name = name.strip().lower()
    if name not in _VARIANTS:
        raise ValueError(f"unknown model {name!r}; choose from {_VARIANTS}")
    params: dict[str, float] = {}
    if params_part.strip():
        for item in params_part.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"malformed model parameter {item!r}; expected key=value")
            try:
                params[key.strip().lower()] = float(value)
            except ValueError as exc:
                raise ValueError(f"non-numeric model parameter {item!r}") from exc
    allowed = {"gamma"} if name != HALL else {"gamma", "c", "delta"}
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"parameters {sorted(unknown)} not valid for model {name!r}")
    if "gamma" not in params:
        raise ValueError(f"model {name!r} requires gamma=")
    if name == HALL:
        return QuantileModel(HALL, params["gamma"], c=params.get("c", 1.0),
                             delta=params.get("delta"))
    return QuantileModel(name, params["gamma"])
