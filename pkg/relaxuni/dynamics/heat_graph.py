# filename: heat_graph.py
# @Time    : 2025/11/17 10:40
# @Software: PyCharm
"""
图上的热扩散 H(t) = exp(−τ t L) H(0) | Heat diffusion on graphs
"""

import threading
from collections.abc import Sequence
from typing import cast

import numpy as np
import numpy.typing as npt
from cachetools import LRUCache

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import ArgumentError, DimensionError
from relaxuni.graph.graph import FeatureMatrix, Graph, grid_graph, laplacian
from relaxuni.linalg.expm import mat_exp_reference
from relaxuni.schema import LaplacianKind

__all__ = ["GridHeatPropagator", "get_grid_propagator", "simulate_heat_graph"]


def _initial(g: Graph, h0: FeatureMatrix | npt.ArrayLike) -> npt.NDArray[np.float64]:
    fm = h0 if isinstance(h0, FeatureMatrix) else FeatureMatrix.from_vector(h0)
    if fm.n != g.n:
        raise DimensionError(f"h0 has {fm.n} rows, graph has {g.n} nodes", rows=fm.n, nodes=g.n)
    return np.real(fm.values).astype(np.float64)


def _check_times(times: Sequence[float] | npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    ts = np.asarray(times, dtype=np.float64).reshape(-1)
    if not len(ts) or ts[0] < 0 or np.any(np.diff(ts) <= 0):
        raise ArgumentError("times must be nonempty, start at >= 0 and increase strictly")
    return ts


def simulate_heat_graph(
    g: Graph,
    h0: FeatureMatrix | npt.ArrayLike,
    tau: float,
    times: Sequence[float] | npt.NDArray[np.float64],
    kind: LaplacianKind = LaplacianKind.NORMALIZED,
) -> Trajectory:
    """
    第 k 帧为 exp(−τ·t_k·L)·H(0) | Frame k is exp(−τ·t_k·L)·H(0)

    Args:
        g: Graph without isolated nodes (normalized kind)
        h0: Initial heat, n×1 (or a length-n vector)
        tau: Diffusivity τ > 0
        times: Increasing sample times
        kind: Normalized (I − Ã, default) or combinatorial (D − A) Laplacian

    Raises:
        DegreeError: If the normalized Laplacian meets an isolated node
    """
    if tau <= 0:
        raise ArgumentError(f"tau must be > 0, got {tau}", tau=tau)
    x0 = _initial(g, h0)
    ts = _check_times(times)
    lap = laplacian(g, kind)
    frames = np.stack([x0 if t == 0.0 else mat_exp_reference(-tau * t * lap) @ x0 for t in ts])
    return Trajectory(times=ts, frames=frames, source_id=f"graph:n={g.n}", metadata={"tau": tau, "laplacian": kind.value})


class GridHeatPropagator:
    """
    网格形状对应的谱分解 L = V diag(λ) Vᵀ，重复使用于同形状的所有样本。
    Spectral decomposition L = V diag(λ) Vᵀ for one grid shape, reused by every sample of that shape.
    """

    def __init__(self, rows: int, cols: int, kind: LaplacianKind) -> None:
        self.rows = rows
        self.cols = cols
        self.kind = kind
        self.graph = grid_graph(rows, cols)
        lap = laplacian(self.graph, kind)
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(0.5 * (lap + lap.T))

    def propagate(self, h0: npt.NDArray[np.float64], tau: float, times: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """返回 (len(times), n, d) | Returns (len(times), n, d)"""
        coeffs = self.eigenvectors.T @ h0
        decay = np.exp(-tau * np.outer(times, self.eigenvalues))
        return np.stack([self.eigenvectors @ (decay[k][:, None] * coeffs) for k in range(len(times))])


_propagator_cache: LRUCache = LRUCache(maxsize=64)
_propagator_lock = threading.Lock()


def get_grid_propagator(rows: int, cols: int, kind: LaplacianKind = LaplacianKind.NORMALIZED) -> GridHeatPropagator:
    key = (rows, cols, kind.value)
    with _propagator_lock:
        if key not in _propagator_cache:
            _propagator_cache[key] = GridHeatPropagator(rows, cols, kind)
        return cast(GridHeatPropagator, _propagator_cache[key])
