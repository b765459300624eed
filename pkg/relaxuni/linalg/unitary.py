# filename: unitary.py
# @Time    : 2025/11/12 11:05
# @Software: PyCharm
from relaxuni.linalg.dense import DenseMatrix, as_dense, conj_transpose, require_square
from relaxuni.linalg.expm import mat_exp_reference


def skew_from_free(s: DenseMatrix) -> DenseMatrix:
    """
    W = S − S^†；W + W^† = 0 逐元素精确成立 | holds exactly entrywise

    For real S this is the skew-symmetric S − Sᵀ.
    """
    s = as_dense(s, name="s")
    require_square(s, name="s")
    return s - conj_transpose(s)


def unitary_from_free(s: DenseMatrix) -> DenseMatrix:
    """
    U = exp(S − S^†)。实数输入得到正交矩阵 | Real input yields an orthogonal matrix.
    """
    return mat_exp_reference(skew_from_free(s))
