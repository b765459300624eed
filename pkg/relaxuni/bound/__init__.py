"""
酉逼近误差下界 | Unitary approximation-error lower bound
"""

from relaxuni.bound.estimate import (
    DEFAULT_ORBIT_SAMPLES,
    DEFAULT_RADIUS_POINTS,
    MIN_ORBIT_SAMPLES,
    BoundEstimate,
    default_radius_grid,
    estimate_bound,
    lower_bound_estimate,
    orbit_norm_variance,
)
from relaxuni.bound.sampler import OrbitSampler, evaluate_target, sample_domain, sphere_points, unit_disk_sampler
from relaxuni.bound.verify import DEFAULT_DOMAIN_SAMPLES, BoundReport, UnitaryMap, fit_unitary_map, verify_bound, write_bound_report

__all__ = [
    "DEFAULT_DOMAIN_SAMPLES",
    "DEFAULT_ORBIT_SAMPLES",
    "DEFAULT_RADIUS_POINTS",
    "MIN_ORBIT_SAMPLES",
    "BoundEstimate",
    "BoundReport",
    "OrbitSampler",
    "UnitaryMap",
    "default_radius_grid",
    "estimate_bound",
    "evaluate_target",
    "fit_unitary_map",
    "lower_bound_estimate",
    "orbit_norm_variance",
    "sample_domain",
    "sphere_points",
    "unit_disk_sampler",
    "verify_bound",
    "write_bound_report",
]
