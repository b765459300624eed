# filename: dense.py
# @Time    : 2025/11/12 10:31
# @Software: PyCharm
"""
稠密矩阵约定 | Dense matrix conventions

`DenseMatrix` 即二维 `numpy.ndarray`，dtype 只允许 float64 或 complex128。
A `DenseMatrix` is a 2-D `numpy.ndarray` whose dtype is float64 or complex128.
Other dtypes are converted once here, at the module boundary; real input is never promoted to complex.
"""

from typing import TypeAlias

import numpy as np
import numpy.typing as npt
from scipy import sparse

from relaxuni.exceptions import DimensionError
from relaxuni.schema import ScalarKind

DenseMatrix: TypeAlias = npt.NDArray[np.float64] | npt.NDArray[np.complex128]


def as_dense(x: npt.ArrayLike, *, name: str = "matrix") -> DenseMatrix:
    """
    转换为合法的 DenseMatrix | Convert to a valid DenseMatrix

    Args:
        x: Array-like input
        name: Label used in error messages

    Returns:
        DenseMatrix: float64 for real input, complex128 for complex input

    Raises:
        DimensionError: If the input is not 2-D
    """
    arr = np.asarray(x)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}", shape=arr.shape)
    if np.iscomplexobj(arr):
        return np.ascontiguousarray(arr, dtype=np.complex128)
    return np.ascontiguousarray(arr, dtype=np.float64)


def scalar_kind(m: DenseMatrix) -> ScalarKind:
    return ScalarKind.COMPLEX128 if np.iscomplexobj(m) else ScalarKind.REAL64


def require_square(m: DenseMatrix, *, name: str = "matrix") -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}", shape=m.shape)


def conj_transpose(m: DenseMatrix) -> DenseMatrix:
    """M^† (plain transpose for real matrices)."""
    return m.conj().T if np.iscomplexobj(m) else m.T


def frobenius_norm(m: DenseMatrix) -> float:
    return float(np.linalg.norm(m, "fro"))


def is_unitary(u: DenseMatrix, tol: float = 1e-10) -> bool:
    require_square(u, name="u")
    eye = np.eye(u.shape[0])
    return frobenius_norm(conj_transpose(u) @ u - eye) < tol


def gershgorin_bound(m: DenseMatrix | sparse.spmatrix) -> float:
    """Upper bound on the spectral radius: max over rows of the absolute row sum. Accepts scipy sparse input."""
    if m.shape[0] == 0:
        return 0.0
    if sparse.issparse(m):
        return float(abs(m).sum(axis=1).max())
    return float(np.max(np.sum(np.abs(m), axis=1)))
