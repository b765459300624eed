"""
稠密/稀疏矩阵核心、矩阵指数与酉参数化 | Matrix kernels, matrix exponentials and unitary parameterizations
"""

from relaxuni.linalg.dense import (
    DenseMatrix,
    as_dense,
    conj_transpose,
    frobenius_norm,
    gershgorin_bound,
    is_unitary,
    require_square,
    scalar_kind,
)
from relaxuni.linalg.expm import REFERENCE_ORDER, mat_exp_reference, mat_exp_taylor
from relaxuni.linalg.sparse import SparseSym
from relaxuni.linalg.unitary import skew_from_free, unitary_from_free

__all__ = [
    "DenseMatrix",
    "REFERENCE_ORDER",
    "SparseSym",
    "as_dense",
    "conj_transpose",
    "frobenius_norm",
    "gershgorin_bound",
    "is_unitary",
    "mat_exp_reference",
    "mat_exp_taylor",
    "require_square",
    "scalar_kind",
    "skew_from_free",
    "unitary_from_free",
]
