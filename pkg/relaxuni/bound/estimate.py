# filename: estimate.py
# @Time    : 2025/11/21 10:15
# @Software: PyCharm
"""
酉逼近误差下界的蒙特卡洛估计 | Monte-Carlo estimate of the unitary approximation-error lower bound

∫_Z p(z)‖u(z) − f(z)‖² dz ≥ ∫_F p(‖te‖)·V_{Gz}[‖f‖] dz
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.integrate import trapezoid

from relaxuni.bound.sampler import OrbitSampler, evaluate_target, sphere_points
from relaxuni.exceptions import ArgumentError
from relaxuni.schema import VarianceStatistic
from relaxuni.utils import seed_stream

__all__ = [
    "DEFAULT_ORBIT_SAMPLES",
    "DEFAULT_RADIUS_POINTS",
    "MASS_TOLERANCE",
    "MIN_ORBIT_SAMPLES",
    "BoundEstimate",
    "default_radius_grid",
    "estimate_bound",
    "lower_bound_estimate",
    "orbit_norm_variance",
]

MIN_ORBIT_SAMPLES = 1000
# 200 个半径 × 5000 = 10⁶ 个样本 | 200 radii x 5000 = 10⁶ samples
DEFAULT_ORBIT_SAMPLES = 5000
DEFAULT_RADIUS_POINTS = 200
MASS_TOLERANCE = 0.02


def orbit_norm_variance(
    sampler: OrbitSampler,
    radius: float,
    n_samples: int = DEFAULT_ORBIT_SAMPLES,
    rng: np.random.Generator | None = None,
) -> float:
    """
    半径为 radius 的球面上 f 的方差 | Variance of f over the sphere of the given radius

    NORM 统计量为 Var(‖f(z)‖)；VECTOR 统计量为 E‖f(z) − E f‖²。
    The NORM statistic is Var(‖f(z)‖); the VECTOR statistic is E‖f(z) − E f‖².

    Args:
        sampler: Target, dimension and statistic
        radius: Sphere radius, > 0
        n_samples: Uniform sphere samples, >= 1000
        rng: Random stream (default: the sampler's "orbit" stream)

    Raises:
        ArgumentError: If radius <= 0 or n_samples < 1000
        SamplingError: If f is non-finite at a sample
    """
    if radius <= 0:
        raise ArgumentError(f"radius must be > 0, got {radius}", radius=radius)
    if n_samples < MIN_ORBIT_SAMPLES:
        raise ArgumentError(f"n_samples must be >= {MIN_ORBIT_SAMPLES}, got {n_samples}", n_samples=n_samples)
    rng = rng if rng is not None else seed_stream(sampler.seed, "orbit", float(radius).hex())
    points = sphere_points(rng, radius, n_samples, sampler.dimension)
    values = evaluate_target(sampler.target, points)
    if sampler.statistic == VarianceStatistic.VECTOR:
        return float(np.mean(np.sum((values - values.mean(axis=0)) ** 2, axis=1)))
    return float(np.var(np.linalg.norm(values, axis=1)))


def default_radius_grid(sampler: OrbitSampler, points: int = DEFAULT_RADIUS_POINTS) -> npt.NDArray[np.float64]:
    return np.linspace(0.0, sampler.support, points)


def _check_grid(radius_grid: npt.ArrayLike) -> npt.NDArray[np.float64]:
    grid = np.asarray(radius_grid, dtype=np.float64).reshape(-1)
    if len(grid) < 2 or grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise ArgumentError("radius_grid must hold at least two strictly increasing nonnegative radii")
    return grid


def lower_bound_estimate(
    sampler: OrbitSampler,
    radius_grid: npt.ArrayLike | None = None,
    n_samples: int = DEFAULT_ORBIT_SAMPLES,
    threads: int | None = None,
    repeat: int = 0,
) -> float:
    """
    对 p(r)·V(r) 在半径网格上做梯形积分 | Trapezoid integral of p(r)·V(r) over the radius grid

    半径 0 处轨道退化为一点，方差取 0。网格外的密度质量超过 2% 时给出警告。
    The orbit at radius 0 is a single point with zero variance. Density mass outside the grid beyond 2%
    triggers a warning.

    Args:
        sampler: Orbit sampler
        radius_grid: Increasing radii (default: 200 points on [0, support])
        n_samples: Sphere samples per radius
        threads: Worker threads (default: CPU count)
        repeat: Index of an independent repetition; selects the random sub-streams

    Returns:
        float: The bound estimate
    """
    grid = default_radius_grid(sampler) if radius_grid is None else _check_grid(radius_grid)
    density = sampler.density(grid)
    mass = float(trapezoid(density, grid))
    if abs(1.0 - mass) > MASS_TOLERANCE:
        logger.warning(f"radius grid misses density mass truncated_mass={1.0 - mass:.4f} grid_max={grid[-1]} support={sampler.support}")

    def variance_at(idx: int) -> float:
        r = float(grid[idx])
        if r == 0.0 or density[idx] == 0.0:
            return 0.0
        return orbit_norm_variance(sampler, r, n_samples, rng=seed_stream(sampler.seed, "orbit", repeat, idx))

    workers = max(1, threads or os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        variances = np.array(list(pool.map(variance_at, range(len(grid)))))
    value = float(trapezoid(density * variances, grid))
    logger.debug(f"lower bound estimated value={value:.6f} radii={len(grid)} n_samples={n_samples} repeat={repeat}")
    return value


@dataclass(frozen=True)
class BoundEstimate:
    """
    Attributes:
        value: Mean of the repeated bound estimates
        stderr: Standard error of that mean (0 with a single repeat)
        repeats: The individual estimates
    """

    value: float
    stderr: float
    repeats: tuple[float, ...]


def estimate_bound(
    sampler: OrbitSampler,
    radius_grid: npt.ArrayLike | None = None,
    n_samples: int = DEFAULT_ORBIT_SAMPLES,
    repeats: int = 4,
    threads: int | None = None,
) -> BoundEstimate:
    """重复独立估计以得到蒙特卡洛标准误 | Repeat independent estimates to get a Monte-Carlo standard error"""
    if repeats < 1:
        raise ArgumentError(f"repeats must be >= 1, got {repeats}", repeats=repeats)
    values = [lower_bound_estimate(sampler, radius_grid, n_samples, threads, repeat=k) for k in range(repeats)]
    stderr = float(np.std(values, ddof=1) / np.sqrt(repeats)) if repeats > 1 else 0.0
    return BoundEstimate(value=float(np.mean(values)), stderr=stderr, repeats=tuple(values))
