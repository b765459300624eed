# filename: weather.py
# @Time    : 2025/11/20 11:20
# @Software: PyCharm
"""
纬度加权的 RMSE 与 ACC | Latitude-weighted RMSE and ACC

形状约定 | Shape conventions:
    f: (T, L, I, J) forecasts by verification time, lead, latitude, longitude
    o: (T, I, J) observations at the verification times
    c: (T, I, J) or (T, L, I, J) climatology, supplied by the caller
"""

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import ArgumentError, DimensionError

__all__ = ["acc_lat", "lat_weights", "rmse_lat"]


def lat_weights(lat_edges: npt.ArrayLike, degrees: bool = True) -> npt.NDArray[np.float64]:
    """
    w(i) = (sin θᵘ_i − sin θˡ_i) / mean_i(sin θᵘ_i − sin θˡ_i)，权重之和等于纬度数 | weights sum to I

    Args:
        lat_edges: I + 1 increasing latitude band edges
        degrees: Edges are in degrees (radians otherwise)
    """
    edges = np.asarray(lat_edges, dtype=np.float64).reshape(-1)
    if len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise ArgumentError("lat_edges must hold at least two strictly increasing values")
    theta = np.deg2rad(edges) if degrees else edges
    band = np.sin(theta[1:]) - np.sin(theta[:-1])
    return band / np.mean(band)


def _check(f: npt.NDArray[np.float64], o: npt.NDArray[np.float64], w: npt.NDArray[np.float64]) -> None:
    if f.ndim != 4 or o.ndim != 3:
        raise DimensionError(f"expected f (T, L, I, J) and o (T, I, J), got {f.shape} and {o.shape}")
    if f.shape[0] != o.shape[0] or f.shape[2:] != o.shape[1:]:
        raise DimensionError(f"forecast {f.shape} and observation {o.shape} do not conform")
    if w.shape != (f.shape[2],):
        raise DimensionError(f"{f.shape[2]} latitudes but {w.shape} weights")


def rmse_lat(f: npt.ArrayLike, o: npt.ArrayLike, w: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """RMSE_l = sqrt((1/TIJ)·Σ w(i)(f − o)²)，每个预报时效一个值 | one value per lead"""
    fa, oa, wa = np.asarray(f, dtype=np.float64), np.asarray(o, dtype=np.float64), np.asarray(w, dtype=np.float64)
    _check(fa, oa, wa)
    sq = wa[None, None, :, None] * (fa - oa[:, None]) ** 2
    return np.sqrt(np.mean(sq, axis=(0, 2, 3)))


def acc_lat(f: npt.ArrayLike, o: npt.ArrayLike, c: npt.ArrayLike, w: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    距平相关系数，对验证时间平均 | Anomaly correlation, averaged over verification times

    Returns:
        ndarray: One value in [−1, 1] per lead
    """
    fa, oa, wa = np.asarray(f, dtype=np.float64), np.asarray(o, dtype=np.float64), np.asarray(w, dtype=np.float64)
    ca = np.asarray(c, dtype=np.float64)
    _check(fa, oa, wa)
    if ca.shape == oa.shape:
        f_anom = fa - ca[:, None]
    elif ca.shape == fa.shape:
        f_anom = fa - ca
        ca = ca[:, 0]
    else:
        raise DimensionError(f"climatology {ca.shape} conforms to neither {oa.shape} nor {fa.shape}")
    o_anom = (oa - ca)[:, None]
    weight = wa[None, None, :, None]
    num = np.sum(weight * f_anom * o_anom, axis=(2, 3))
    den = np.sqrt(np.sum(weight * f_anom**2, axis=(2, 3)) * np.sum(weight * o_anom**2, axis=(2, 3)))
    if np.any(den == 0.0):
        raise ArgumentError("ACC undefined: an anomaly field is identically zero")
    return np.mean(num / den, axis=0)
