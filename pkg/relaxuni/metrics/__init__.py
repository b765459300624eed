"""
评估指标 | Evaluation metrics
"""

from relaxuni.metrics.correlation import CorrelationEstimate, SmoothnessError, err_smooth, two_point_correlation
from relaxuni.metrics.pointwise import SMAPE_EPS, nrmse, nrmse_per_frame, smape, smape_per_frame
from relaxuni.metrics.report import METRIC_COLUMNS, ROLLOUT_SCALE, MetricRow, summarize, write_metric_rows, write_metric_summary
from relaxuni.metrics.smoothness import (
    KDE_GRID_POINTS,
    KL_BINS,
    RqDistribution,
    kl_rq_distributions,
    kl_rq_kde,
    mre,
    rayleigh_error,
    rq_distribution,
    rq_operator,
    rq_series,
)
from relaxuni.metrics.weather import acc_lat, lat_weights, rmse_lat

__all__ = [
    "CorrelationEstimate",
    "KDE_GRID_POINTS",
    "KL_BINS",
    "METRIC_COLUMNS",
    "MetricRow",
    "ROLLOUT_SCALE",
    "RqDistribution",
    "SMAPE_EPS",
    "SmoothnessError",
    "acc_lat",
    "err_smooth",
    "kl_rq_distributions",
    "kl_rq_kde",
    "lat_weights",
    "mre",
    "nrmse",
    "nrmse_per_frame",
    "rayleigh_error",
    "rmse_lat",
    "rq_distribution",
    "rq_operator",
    "rq_series",
    "smape",
    "smape_per_frame",
    "summarize",
    "two_point_correlation",
    "write_metric_rows",
    "write_metric_summary",
]
