# filename: pointwise.py
# @Time    : 2025/11/20 10:00
# @Software: PyCharm
"""
尺度不变的逐点误差 | Scale-invariant pointwise errors

NRMSE = (1/T)·Σ_t sqrt(mean((Ŷ_t − Y_t)²) / mean(Y_t²))
SMAPE = (1/T)·Σ_t mean(2|Y_t − Ŷ_t| / (|Y_t| + |Ŷ_t| + ε))，ε = 1e-8
"""

import numpy as np
import numpy.typing as npt

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import DimensionError, UndefinedQuotientError

__all__ = ["SMAPE_EPS", "nrmse", "nrmse_per_frame", "smape", "smape_per_frame"]

SMAPE_EPS = 1e-8


def _pair(pred: Trajectory | npt.ArrayLike, target: Trajectory | npt.ArrayLike) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    p = pred.frames if isinstance(pred, Trajectory) else np.asarray(pred, dtype=np.float64)
    t = target.frames if isinstance(target, Trajectory) else np.asarray(target, dtype=np.float64)
    if p.shape != t.shape:
        raise DimensionError(f"shapes differ: {p.shape} vs {t.shape}", pred=p.shape, target=t.shape)
    if p.ndim < 2 or not len(p):
        raise DimensionError(f"expected (T, n[, d]) frames, got {p.shape}", shape=p.shape)
    return p.reshape(len(p), -1), t.reshape(len(t), -1)


def nrmse_per_frame(pred: Trajectory | npt.ArrayLike, target: Trajectory | npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Raises:
        UndefinedQuotientError: If a target frame has zero energy; context names the frame
    """
    p, t = _pair(pred, target)
    energy = np.mean(t**2, axis=1)
    zero = np.nonzero(energy == 0.0)[0]
    if len(zero):
        raise UndefinedQuotientError(f"NRMSE undefined: target frame {int(zero[0])} has zero energy", frame=int(zero[0]))
    return np.sqrt(np.mean((p - t) ** 2, axis=1) / energy)


def nrmse(pred: Trajectory | npt.ArrayLike, target: Trajectory | npt.ArrayLike) -> float:
    return float(np.mean(nrmse_per_frame(pred, target)))


def smape_per_frame(pred: Trajectory | npt.ArrayLike, target: Trajectory | npt.ArrayLike, eps: float = SMAPE_EPS) -> npt.NDArray[np.float64]:
    p, t = _pair(pred, target)
    return np.mean(2.0 * np.abs(t - p) / (np.abs(t) + np.abs(p) + eps), axis=1)


def smape(pred: Trajectory | npt.ArrayLike, target: Trajectory | npt.ArrayLike, eps: float = SMAPE_EPS) -> float:
    return float(np.mean(smape_per_frame(pred, target, eps)))
