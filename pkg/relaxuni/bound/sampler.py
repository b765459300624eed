# filename: sampler.py
# @Time    : 2025/11/21 09:30
# @Software: PyCharm
"""
轨道采样器 | Orbit sampler

酉群作用下的轨道是同心球面，基本域为射线 {t·e}。ℂⁿ 按 ℝ²ⁿ 处理：轨道仍是 ℝ²ⁿ 中的球面。
Orbits of the unitary group are concentric spheres and the fundamental domain is the ray {t·e}.
ℂⁿ is handled as ℝ²ⁿ, where the orbits are again spheres.

radius_density 是已经带上轨道测度雅可比的径向密度，例如单位圆盘上的 p(r) = 2r。
radius_density is the radial density with the orbit-measure Jacobian already applied, e.g. p(r) = 2r on the unit disk.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import ArgumentError, SamplingError
from relaxuni.schema import VarianceStatistic

__all__ = [
    "RadiusDensity",
    "TargetMap",
    "OrbitSampler",
    "evaluate_target",
    "sample_domain",
    "sphere_points",
    "unit_disk_sampler",
]

RadiusDensity = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
TargetMap = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


@dataclass(frozen=True)
class OrbitSampler:
    """
    Attributes:
        dimension: Real dimension of the ambient space (2n for ℂⁿ)
        radius_density: p(r), vectorized over radii
        target: f, mapping (m, dimension) points to (m, k) values
        support: Largest radius with nonzero density
        seed: Top-level seed of every sub-stream drawn from this sampler
        statistic: Orbit variance statistic used by the bound
    """

    dimension: int
    radius_density: RadiusDensity
    target: TargetMap
    support: float = 1.0
    seed: int = 0
    statistic: VarianceStatistic = VarianceStatistic.NORM

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ArgumentError(f"dimension must be >= 1, got {self.dimension}", dimension=self.dimension)
        if self.support <= 0:
            raise ArgumentError(f"support must be > 0, got {self.support}", support=self.support)

    def density(self, radii: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """
        Raises:
            ArgumentError: If the density is negative anywhere on `radii`
        """
        r = np.asarray(radii, dtype=np.float64)
        p = np.asarray(self.radius_density(r), dtype=np.float64)
        if np.any(p < 0):
            bad = float(r[np.argmax(p < 0)])
            raise ArgumentError(f"radius density is negative at r={bad}", radius=bad)
        return p


def sphere_points(rng: np.random.Generator, radius: float, n_samples: int, dimension: int) -> npt.NDArray[np.float64]:
    """归一化高斯向量得到球面均匀样本 | Uniform sphere samples from normalized Gaussians"""
    g = rng.standard_normal((n_samples, dimension))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # 零向量的概率为 0，但仍避免除零 | a zero draw has probability zero, still guard it
    norms[norms == 0.0] = 1.0
    return radius * g / norms


def sample_domain(sampler: OrbitSampler, rng: np.random.Generator, n_samples: int, grid_points: int = 2048) -> npt.NDArray[np.float64]:
    """
    按 p(r) 抽半径（表格化逆 CDF），方向取球面均匀 | Radii by tabulated inverse CDF of p(r), directions uniform

    Raises:
        ArgumentError: If the density has no mass on [0, support]
    """
    grid = np.linspace(0.0, sampler.support, grid_points)
    p = sampler.density(grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (p[1:] + p[:-1]) * np.diff(grid))])
    if cdf[-1] <= 0:
        raise ArgumentError("radius density has no mass on its support")
    radii = np.interp(rng.uniform(0.0, cdf[-1], n_samples), cdf, grid)
    directions = sphere_points(rng, 1.0, n_samples, sampler.dimension)
    return radii[:, None] * directions


def evaluate_target(target: TargetMap, points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """
    Raises:
        SamplingError: If f is non-finite at a sample; context["point"] is that sample
    """
    values = np.asarray(target(points), dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    if len(values) != len(points):
        raise ArgumentError(f"target returned {len(values)} values for {len(points)} points")
    finite = np.all(np.isfinite(values), axis=1)
    if not np.all(finite):
        point = points[int(np.argmin(finite))].tolist()
        raise SamplingError(f"target is not finite at {point}", point=point)
    return values


def _unit_disk_target(points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    theta = np.arctan2(points[:, 1], points[:, 0])
    r = np.linalg.norm(points, axis=1)
    return np.stack([np.sin(theta) + r, np.cos(theta) + r], axis=1)


def _unit_disk_density(r: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return np.where((r >= 0) & (r <= 1.0), 2.0 * r, 0.0)


def unit_disk_sampler(seed: int = 0, statistic: VarianceStatistic = VarianceStatistic.VECTOR) -> OrbitSampler:
    """
    单位圆盘示例：均匀密度 1/π，f(θ, r) = (sin θ + r, cos θ + r)，p(r) = 2r
    Unit-disk example: uniform density 1/π, f(θ, r) = (sin θ + r, cos θ + r), p(r) = 2r

    每个圆周上 E[f] = (r, r)，E‖f − E f‖² = 1，因此向量统计量下界为 ∫₀¹ 2r dr = 1。
    On every circle E[f] = (r, r) and E‖f − E f‖² = 1, so the vector-statistic bound is ∫₀¹ 2r dr = 1.
    """
    return OrbitSampler(
        dimension=2,
        radius_density=_unit_disk_density,
        target=_unit_disk_target,
        support=1.0,
        seed=seed,
        statistic=statistic,
    )
