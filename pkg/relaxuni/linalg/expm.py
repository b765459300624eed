# filename: expm.py
# @Time    : 2025/11/12 10:48
# @Software: PyCharm
"""
矩阵指数 | Matrix exponentials

- `mat_exp_taylor`：截断泰勒级数，Horner 形式累加 | truncated Taylor series, Horner accumulation
- `mat_exp_reference`：缩放平方法，作为截断误差测试的参考 | scaling-and-squaring reference
"""

import math

import numpy as np

from relaxuni.exceptions import ArgumentError
from relaxuni.linalg.dense import DenseMatrix, as_dense, frobenius_norm, require_square

REFERENCE_ORDER = 30
_SCALE_TARGET = 0.5


def mat_exp_taylor(m: DenseMatrix, t_max: int) -> DenseMatrix:
    """
    Σ_{i=0}^{t_max} M^i / i!，使用 p_k = I + M·p_{k+1}/(k+1)，从不显式构造 M^i。

    Args:
        m: Square matrix
        t_max: Truncation order (>= 0)

    Returns:
        DenseMatrix: Truncated exponential, same scalar kind as `m`

    Raises:
        DimensionError: If `m` is not square

    Examples:
        >>> mat_exp_taylor(np.zeros((2, 2)), 5)
        array([[1., 0.],
               [0., 1.]])
    """
    m = as_dense(m, name="m")
    require_square(m, name="m")
    if t_max < 0:
        raise ArgumentError(f"t_max must be >= 0, got {t_max}", t_max=t_max)
    eye = np.eye(m.shape[0], dtype=m.dtype)
    p = eye.copy()
    for k in range(t_max, 0, -1):
        p = eye + (m @ p) / k
    return p


def mat_exp_reference(m: DenseMatrix) -> DenseMatrix:
    """
    缩放平方法参考实现 | Scaling-and-squaring reference exponential

    M is scaled by 2^{-s} so that ‖M/2^s‖_F <= 0.5, exponentiated with the order-30 Taylor polynomial
    (machine precision at that norm), then squared s times.
    """
    m = as_dense(m, name="m")
    require_square(m, name="m")
    norm = frobenius_norm(m)
    s = 0
    if norm > _SCALE_TARGET:
        s = int(math.ceil(math.log2(norm / _SCALE_TARGET)))
    e = mat_exp_taylor(m / (2.0**s), REFERENCE_ORDER)
    for _ in range(s):
        e = e @ e
    return e
