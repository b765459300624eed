# filename: smoothness.py
# @Time    : 2025/11/20 09:15
# @Software: PyCharm
"""
基于 Rayleigh 商的平滑度指标 | Smoothness metrics built on the Rayleigh quotient

- mre:                 |mean R(pred) − mean R(target)|
- rayleigh_error:      (1/T)·Σ_t |R(Y_t) − R(Ŷ_t)|，全零帧跳过 | all-zero frames skipped
- kl_rq_distributions: 50 个等宽箱，每箱 +1 平滑 | 50 uniform bins on [0, 2], +1 smoothing per bin
- kl_rq_kde:           核密度估计，对微小偏移连续 | kernel density estimate, continuous in small shifts
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.special import kl_div
from scipy.stats import gaussian_kde

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import ArgumentError, DimensionError, UndefinedQuotientError
from relaxuni.graph.graph import Graph, normalized_adjacency
from relaxuni.graph.rayleigh import rayleigh_quotient_dense
from relaxuni.linalg.dense import DenseMatrix, as_dense
from relaxuni.mesh.operators import MeshOperators

__all__ = [
    "KDE_GRID_POINTS",
    "KL_BINS",
    "RQ_RANGE",
    "RqDistribution",
    "RqSource",
    "kl_rq_distributions",
    "kl_rq_kde",
    "mre",
    "rayleigh_error",
    "rq_distribution",
    "rq_operator",
    "rq_series",
]

KL_BINS = 50
KDE_GRID_POINTS = 401
RQ_RANGE = (0.0, 2.0)
_RANGE_TOL = 1e-9
_DENSITY_FLOOR = 1e-300

RqSource = Graph | MeshOperators | DenseMatrix


def rq_operator(source: RqSource) -> DenseMatrix:
    """Rayleigh 商所用的归一化邻接 | Normalized adjacency the Rayleigh quotient uses"""
    if isinstance(source, Graph):
        return normalized_adjacency(source)
    if isinstance(source, MeshOperators):
        return source.normalized_adjacency
    return as_dense(source, name="operator")


def _frame(x: npt.ArrayLike) -> DenseMatrix:
    arr = np.asarray(x)
    return as_dense(arr[:, None] if arr.ndim == 1 else arr, name="features")


def _operators(sources: RqSource | Sequence[RqSource], count: int) -> list[DenseMatrix]:
    if isinstance(sources, (Graph, MeshOperators, np.ndarray)):
        op = rq_operator(sources)
        return [op] * count
    ops = [rq_operator(s) for s in sources]
    if len(ops) != count:
        raise DimensionError(f"{count} samples but {len(ops)} operators", samples=count, operators=len(ops))
    return ops


def mre(predictions: Sequence[npt.ArrayLike], targets: Sequence[npt.ArrayLike], sources: RqSource | Sequence[RqSource]) -> float:
    """
    平均 Rayleigh 商误差 | Mean Rayleigh quotient error

    Args:
        predictions: Predicted feature matrices
        targets: Target feature matrices, aligned with predictions
        sources: One graph / mesh / operator for all samples, or one per sample

    Returns:
        float: |mean R(pred) − mean R(target)|

    Raises:
        ArgumentError: If the inputs are empty or of different lengths
        UndefinedQuotientError: If a sample has all-zero features
    """
    if not len(predictions) or len(predictions) != len(targets):
        raise ArgumentError(f"mre needs matched nonempty inputs, got {len(predictions)} and {len(targets)}")
    ops = _operators(sources, len(predictions))
    pred_rq = [rayleigh_quotient_dense(a, _frame(p)) for a, p in zip(ops, predictions)]
    target_rq = [rayleigh_quotient_dense(a, _frame(t)) for a, t in zip(ops, targets)]
    return abs(float(np.mean(pred_rq)) - float(np.mean(target_rq)))


def _frames_of(traj: Trajectory | npt.ArrayLike) -> npt.NDArray[np.float64]:
    if isinstance(traj, Trajectory):
        return traj.frames
    arr = np.asarray(traj, dtype=np.float64)
    return arr[:, :, None] if arr.ndim == 2 else arr


def rq_series(traj: Trajectory | npt.ArrayLike, source: RqSource) -> npt.NDArray[np.float64]:
    """逐帧 Rayleigh 商，全零帧为 NaN | Per-frame Rayleigh quotient, NaN for all-zero frames"""
    a = rq_operator(source)
    out = []
    for frame in _frames_of(traj):
        try:
            out.append(rayleigh_quotient_dense(a, frame))
        except UndefinedQuotientError:
            out.append(math.nan)
    return np.asarray(out)


def rayleigh_error(pred_traj: Trajectory | npt.ArrayLike, target_traj: Trajectory | npt.ArrayLike, source: RqSource) -> float:
    """
    Rayleigh 误差：逐帧 |R(Y_t) − R(Ŷ_t)| 的平均 | Rayleigh error, the mean per-frame |R(Y_t) − R(Ŷ_t)|

    Raises:
        DimensionError: If the trajectories differ in length
        UndefinedQuotientError: If every frame pair contains an all-zero frame
    """
    pred, target = _frames_of(pred_traj), _frames_of(target_traj)
    if len(pred) != len(target):
        raise DimensionError(f"trajectory lengths differ: {len(pred)} vs {len(target)}", pred=len(pred), target=len(target))
    diffs = np.abs(rq_series(target, source) - rq_series(pred, source))
    valid = np.isfinite(diffs)
    skipped = int(len(diffs) - valid.sum())
    if skipped:
        logger.warning(f"rayleigh_error skipped all-zero frames count={skipped}")
    if not valid.any():
        raise UndefinedQuotientError("every frame pair contains an all-zero frame", frames=len(diffs))
    return float(np.mean(diffs[valid]))


@dataclass
class RqDistribution:
    """
    Rayleigh 商样本及其在 [0, 2] 上的直方图 | Rayleigh quotient samples and their histogram on [0, 2]
    """

    samples: npt.NDArray[np.float64]
    bin_edges: npt.NDArray[np.float64]
    counts: npt.NDArray[np.int64]

    @classmethod
    def from_samples(cls, samples: npt.ArrayLike, bins: int = KL_BINS) -> RqDistribution:
        arr = np.asarray(samples, dtype=np.float64).reshape(-1)
        if not len(arr):
            raise ArgumentError("a Rayleigh quotient distribution needs at least one sample")
        lo, hi = RQ_RANGE
        if np.any(arr < lo - _RANGE_TOL) or np.any(arr > hi + _RANGE_TOL):
            raise ArgumentError(f"Rayleigh quotients must lie in [0, 2], got [{arr.min()}, {arr.max()}]")
        arr = np.clip(arr, lo, hi)
        counts, edges = np.histogram(arr, bins=bins, range=RQ_RANGE)
        return cls(samples=arr, bin_edges=edges, counts=counts.astype(np.int64))

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))


def rq_distribution(features: Sequence[npt.ArrayLike], sources: RqSource | Sequence[RqSource], bins: int = KL_BINS) -> RqDistribution:
    ops = _operators(sources, len(features))
    return RqDistribution.from_samples([rayleigh_quotient_dense(a, _frame(x)) for a, x in zip(ops, features)], bins=bins)


def kl_rq_distributions(p: RqDistribution, q: RqDistribution, bins: int = KL_BINS) -> float:
    """
    KL(P‖Q)：共享箱、每箱加一个伪计数 | shared bins, one pseudo-count per bin

    Returns:
        float: Σ p·log(p/q) >= 0
    """
    if bins < 1:
        raise ArgumentError(f"bins must be >= 1, got {bins}", bins=bins)
    hp, _ = np.histogram(p.samples, bins=bins, range=RQ_RANGE)
    hq, _ = np.histogram(q.samples, bins=bins, range=RQ_RANGE)
    pp = (hp + 1.0) / (hp.sum() + bins)
    qq = (hq + 1.0) / (hq.sum() + bins)
    return float(max(0.0, np.sum(pp * np.log(pp / qq))))


def kl_rq_kde(p: RqDistribution, q: RqDistribution, grid_points: int = KDE_GRID_POINTS) -> float:
    """
    KL(P‖Q)，两侧为同宽高斯核密度，在 [0, 2] 网格上离散化。
    KL(P||Q) between Gaussian kernel densities of equal width, discretized on a grid over [0, 2].

    The kernel width is Scott's rule for P and is reused for Q, so the estimate depends on Q only through
    its sample locations and tends to zero continuously as Q approaches P.

    Raises:
        ArgumentError: If either sample set has fewer than two points or no spread
    """
    if grid_points < 2:
        raise ArgumentError(f"grid_points must be >= 2, got {grid_points}", grid_points=grid_points)
    for name, dist in (("P", p), ("Q", q)):
        if len(dist.samples) < 2 or float(np.std(dist.samples)) == 0.0:
            raise ArgumentError(f"{name} needs at least two distinct Rayleigh quotients for a kernel density")
    kde_p = gaussian_kde(p.samples)
    kde_q = gaussian_kde(q.samples, bw_method=kde_p.factor * float(np.std(p.samples, ddof=1) / np.std(q.samples, ddof=1)))
    grid = np.linspace(*RQ_RANGE, grid_points)
    # 远尾下溢为 0 时保持有限 | keeps underflowed far tails finite
    dp, dq = np.maximum(kde_p(grid), _DENSITY_FLOOR), np.maximum(kde_q(grid), _DENSITY_FLOOR)
    pp, qq = dp / dp.sum(), dq / dq.sum()
    # kl_div 的每项非负 | every kl_div term is nonnegative
    return float(np.sum(kl_div(pp, qq)))
