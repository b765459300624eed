# filename: rayleigh.py
# @Time    : 2025/11/14 10:05
# @Software: PyCharm
"""
图 Rayleigh 商 | Graph Rayleigh quotient

R(X) = tr(X^†(I − Ã)X) / ‖X‖_F²，取值 [0, 2]；0 表示常数信号，2 表示最大振荡。
R(X) lies in [0, 2]: 0 for a constant signal, 2 for a maximally oscillating one.
"""

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import DimensionError, UndefinedQuotientError
from relaxuni.graph.graph import FeatureMatrix, Graph, normalized_adjacency
from relaxuni.linalg.dense import DenseMatrix

__all__ = ["rayleigh_quotient", "rayleigh_quotient_edge_form", "rayleigh_quotient_dense"]


def _features(g_n: int, x: FeatureMatrix | npt.ArrayLike) -> DenseMatrix:
    fm = x if isinstance(x, FeatureMatrix) else FeatureMatrix.from_vector(x)
    if fm.n != g_n:
        raise DimensionError(f"features have {fm.n} rows, graph has {g_n} nodes", rows=fm.n, nodes=g_n)
    return fm.values


def _squared_norm(x: DenseMatrix) -> float:
    denom = float(np.sum(np.abs(x) ** 2))
    if denom == 0.0:
        raise UndefinedQuotientError("Rayleigh quotient of all-zero features is undefined")
    return denom


def rayleigh_quotient_dense(a_norm: DenseMatrix, x: DenseMatrix) -> float:
    """
    对任意归一化邻接（含网格加权邻接）计算 tr(X^†(I − Ã)X)/‖X‖_F²。
    Trace form for any normalized adjacency, including mesh-weighted ones.
    """
    if a_norm.shape != (x.shape[0], x.shape[0]):
        raise DimensionError(f"operator {a_norm.shape} incompatible with features {x.shape}", shapes=[a_norm.shape, x.shape])
    denom = _squared_norm(x)
    # tr(X^† X) − tr(X^† Ã X)；Ã 对称，结果为实数 | Ã symmetric, so the trace is real
    num = denom - float(np.real(np.sum(np.conj(x) * (a_norm @ x))))
    return num / denom


def rayleigh_quotient(g: Graph, x: FeatureMatrix | npt.ArrayLike) -> float:
    """
    矩阵（迹）形式 | Trace form, the implementation of record

    Args:
        g: Graph without isolated nodes
        x: Features with g.n rows (a 1-D array is a single channel)

    Returns:
        float: Value in [0, 2]

    Raises:
        UndefinedQuotientError: If all features are zero
        DegreeError: If the graph has an isolated node

    Example:
        >>> rayleigh_quotient(Graph.from_edges(2, [(0, 1)]), [1.0, -1.0])
        2.0
    """
    values = _features(g.n, x)
    return rayleigh_quotient_dense(normalized_adjacency(g), values)


def rayleigh_quotient_edge_form(g: Graph, x: FeatureMatrix | npt.ArrayLike) -> float:
    """
    边求和形式，按有序对（每条无向边两个方向）求和，½ 使其与迹形式一致。
    Edge-sum form over ordered pairs (both orientations), so the ½ prefactor matches the trace form.
    """
    values = _features(g.n, x)
    denom = _squared_norm(values)
    if any(d == 0 for d in g.degrees):
        normalized_adjacency(g)  # raises DegreeError naming the node
    scaled = values / np.sqrt(g.degrees)[:, None]
    if not g.edges:
        return 0.0
    idx = np.asarray(g.edges, dtype=np.int64)
    diff = scaled[idx[:, 0]] - scaled[idx[:, 1]]
    per_edge = g.edge_weights * np.sum(np.abs(diff) ** 2, axis=1)
    ordered_sum = 2.0 * float(np.sum(per_edge))
    return 0.5 * ordered_sum / denom
