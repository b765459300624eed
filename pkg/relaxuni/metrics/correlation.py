# filename: correlation.py
# @Time    : 2025/11/20 10:40
# @Software: PyCharm
"""
两点相关函数与平滑误差 | Two-point correlation and the smoothness error

ξ(r) 为欧氏距离落在 [r_k, r_{k+1}) 内的所有无序点对上 δ(x)·δ(y) 的均值。
ξ(r) is the mean of δ(x)·δ(y) over unordered point pairs whose Euclidean separation lies in [r_k, r_{k+1}).
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.spatial.distance import pdist

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import ArgumentError, DimensionError

__all__ = ["CorrelationEstimate", "SmoothnessError", "err_smooth", "two_point_correlation"]


@dataclass
class CorrelationEstimate:
    """
    Attributes:
        r_edges: Increasing bin edges (r_bins + 1 values)
        xi: Mean δ(x)·δ(y) per bin, NaN where the bin holds no pair
        pair_counts: Pairs per bin
    """

    r_edges: npt.NDArray[np.float64]
    xi: npt.NDArray[np.float64]
    pair_counts: npt.NDArray[np.int64]

    @property
    def missing(self) -> npt.NDArray[np.bool_]:
        return self.pair_counts == 0


def _check_edges(r_edges: npt.ArrayLike) -> npt.NDArray[np.float64]:
    edges = np.asarray(r_edges, dtype=np.float64).reshape(-1)
    if len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise ArgumentError("r_edges must hold at least two strictly increasing values")
    return edges


def two_point_correlation(positions: npt.ArrayLike, values: npt.ArrayLike, r_edges: npt.ArrayLike) -> CorrelationEstimate:
    """
    按距离分箱的两点相关 | Distance-binned two-point correlation

    Args:
        positions: (n, k) point coordinates
        values: (n,) scalar field, or (n, d) where δ(x)·δ(y) is the channel dot product
        r_edges: Increasing bin edges

    Raises:
        ArgumentError: With fewer than two points or bad edges
        DimensionError: If positions and values disagree on n
    """
    pos = np.asarray(positions, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals[:, None]
    if pos.ndim != 2 or len(pos) < 2:
        raise ArgumentError(f"two_point_correlation needs at least two points, got shape {pos.shape}")
    if len(vals) != len(pos):
        raise DimensionError(f"{len(pos)} positions but {len(vals)} values", positions=len(pos), values=len(vals))
    edges = _check_edges(r_edges)
    r_bins = len(edges) - 1

    dist = pdist(pos)
    i, j = np.triu_indices(len(pos), k=1)
    products = np.sum(vals[i] * vals[j], axis=1)
    idx = np.searchsorted(edges, dist, side="right") - 1
    inside = (idx >= 0) & (idx < r_bins)
    counts = np.bincount(idx[inside], minlength=r_bins).astype(np.int64)
    sums = np.bincount(idx[inside], weights=products[inside], minlength=r_bins)
    xi = np.full(r_bins, np.nan)
    occupied = counts > 0
    xi[occupied] = sums[occupied] / counts[occupied]
    return CorrelationEstimate(r_edges=edges, xi=xi, pair_counts=counts)


@dataclass
class SmoothnessError:
    """
    Attributes:
        value: Mean |ξ_target − ξ_pred| over meshes, time steps and occupied bins
        missing_bins: (mesh, time step, bin) triples excluded for holding no pair
    """

    value: float
    missing_bins: int


def err_smooth(
    preds: Sequence[Trajectory | npt.ArrayLike],
    targets: Sequence[Trajectory | npt.ArrayLike],
    positions: Sequence[npt.ArrayLike],
    r_edges: npt.ArrayLike,
) -> SmoothnessError:
    """
    平滑误差：网格、时间步、距离箱三重平均 | Smoothness error averaged over meshes, time steps and bins

    Args:
        preds: One predicted trajectory per mesh
        targets: One target trajectory per mesh
        positions: Vertex positions per mesh
        r_edges: Shared bin edges

    Raises:
        DimensionError: If the per-mesh inputs are misaligned
        ArgumentError: If no bin is occupied anywhere
    """
    if not (len(preds) == len(targets) == len(positions)) or not len(preds):
        raise DimensionError(f"need matched nonempty per-mesh inputs, got {len(preds)}/{len(targets)}/{len(positions)}")
    edges = _check_edges(r_edges)
    diffs: list[float] = []
    missing = 0
    for pred, target, pos in zip(preds, targets, positions):
        p = pred.frames if isinstance(pred, Trajectory) else np.asarray(pred, dtype=np.float64)
        t = target.frames if isinstance(target, Trajectory) else np.asarray(target, dtype=np.float64)
        if p.shape != t.shape:
            raise DimensionError(f"trajectory shapes differ: {p.shape} vs {t.shape}")
        for k in range(len(p)):
            xi_t = two_point_correlation(pos, t[k], edges)
            xi_p = two_point_correlation(pos, p[k], edges)
            ok = ~xi_t.missing
            missing += int((~ok).sum())
            diffs.extend(np.abs(xi_t.xi[ok] - xi_p.xi[ok]).tolist())
    if not diffs:
        raise ArgumentError("no occupied distance bin; widen r_edges")
    if missing:
        logger.warning(f"err_smooth excluded empty bins count={missing}")
    return SmoothnessError(value=float(np.mean(diffs)), missing_bins=missing)
