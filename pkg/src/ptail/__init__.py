"""p-power tail-index estimation: estimators, synthetic models, Monte Carlo checks."""

from .errors import DataError, QuadratureError, ThresholdError
from .estimators import (
    EstimatorConfig,
    HillPlotSeries,
    LargePSchedule,
    Sample,
    TailEstimate,
    confidence_interval,
    gamma_hat,
    k_sweep,
    large_p_estimate,
    log_spacings,
    make_sample,
    s_n,
)
from .models import (
    QuantileModel,
    RandomStream,
    draw_sample,
    draw_y,
    m_bound_check,
    parse_model_spec,
    quantile_eval,
    y_moment,
    y_value,
)
from .montecarlo import (
    ExperimentSpec,
    TableResult,
    VerificationReport,
    clt_check,
    ks_distance,
    large_p_check,
    lln_uniform_check,
    run_table,
)
from .sklearn_api import TailIndexEstimator
from .special import (
    VarianceProfile,
    delta_variance,
    limit_moment,
    limit_variance,
    log_gamma,
    normal_cdf,
    normal_quantile,
    nu_beta,
)

__version__ = "0.1.0"
