# filename: sparse.py
# @Time    : 2025/11/12 11:20
# @Software: PyCharm
"""
对称稀疏矩阵（只存上三角）| Symmetric sparse matrix storing the upper triangle only

Houses the cotangent weight matrix and weighted adjacencies.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import sparse

from relaxuni.exceptions import ArgumentError, DimensionError

__all__ = ["SparseSym"]


@dataclass(frozen=True, slots=True)
class SparseSym:
    """
    Attributes:
        n: Matrix size
        rows: Upper-triangle row indices (i < j)
        cols: Upper-triangle column indices
        values: Off-diagonal values W_ij
        diagonal: Length-n diagonal
    """

    n: int
    rows: npt.NDArray[np.int64]
    cols: npt.NDArray[np.int64]
    values: npt.NDArray[np.float64]
    diagonal: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if not (len(self.rows) == len(self.cols) == len(self.values)):
            raise DimensionError("rows, cols and values must have equal length")
        if self.diagonal.shape != (self.n,):
            raise DimensionError(f"diagonal must have length {self.n}, got {self.diagonal.shape}")
        if len(self.rows) and (np.any(self.rows >= self.cols) or np.any(self.rows < 0) or np.any(self.cols >= self.n)):
            raise ArgumentError("entries must satisfy 0 <= i < j < n")
        keys = self.rows * self.n + self.cols
        if len(np.unique(keys)) != len(keys):
            raise ArgumentError("duplicate (i, j) entries")

    @classmethod
    def from_entries(
        cls,
        n: int,
        entries: Mapping[tuple[int, int], float] | Iterable[tuple[int, int, float]],
        diagonal: npt.ArrayLike | None = None,
    ) -> SparseSym:
        """
        从 (i, j, w) 条目构造；`diagonal` 为空时取负行和（行和为零）。
        Build from (i, j, w) entries; a missing `diagonal` defaults to minus the off-diagonal row sums.

        Pairs with i > j are reoriented; duplicates are rejected.
        """
        items = entries.items() if isinstance(entries, Mapping) else ((ij[:2], ij[2]) for ij in entries)
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        for (i, j), w in items:  # type: ignore[misc]
            if i == j:
                raise ArgumentError(f"diagonal entry ({i}, {j}) passed as off-diagonal")
            a, b = (int(i), int(j)) if i < j else (int(j), int(i))
            rows.append(a)
            cols.append(b)
            vals.append(float(w))
        r = np.asarray(rows, dtype=np.int64)
        c = np.asarray(cols, dtype=np.int64)
        v = np.asarray(vals, dtype=np.float64)
        if diagonal is None:
            sums = np.zeros(n)
            np.add.at(sums, r, v)
            np.add.at(sums, c, v)
            diag = -sums
        else:
            diag = np.asarray(diagonal, dtype=np.float64)
        return cls(n=n, rows=r, cols=c, values=v, diagonal=diag)

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        for i, j, w in zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist(), strict=True):
            yield i, j, w

    def __len__(self) -> int:
        return len(self.values)

    def weight(self, i: int, j: int) -> float:
        a, b = (i, j) if i < j else (j, i)
        hit = np.nonzero((self.rows == a) & (self.cols == b))[0]
        return float(self.values[hit[0]]) if len(hit) else 0.0

    def to_scipy(self, *, with_diagonal: bool = True) -> sparse.csr_matrix:
        r = np.concatenate([self.rows, self.cols])
        c = np.concatenate([self.cols, self.rows])
        v = np.concatenate([self.values, self.values])
        if with_diagonal:
            idx = np.arange(self.n)
            r = np.concatenate([r, idx])
            c = np.concatenate([c, idx])
            v = np.concatenate([v, self.diagonal])
        return sparse.csr_matrix((v, (r, c)), shape=(self.n, self.n))

    def to_dense(self, *, with_diagonal: bool = True) -> npt.NDArray[np.float64]:
        return np.asarray(self.to_scipy(with_diagonal=with_diagonal).toarray())

    def off_diagonal_row_sums(self) -> npt.NDArray[np.float64]:
        sums = np.zeros(self.n)
        np.add.at(sums, self.rows, self.values)
        np.add.at(sums, self.cols, self.values)
        return sums

    def row_sums(self) -> npt.NDArray[np.float64]:
        return self.off_diagonal_row_sums() + self.diagonal

    def min_off_diagonal(self) -> float:
        return float(self.values.min()) if len(self.values) else 0.0

    def negative_entries(self, tol: float = 0.0) -> list[tuple[int, int]]:
        """Edges whose weight is below −tol."""
        bad = np.nonzero(self.values < -tol)[0]
        return [(int(self.rows[k]), int(self.cols[k])) for k in bad]
