# filename: graph.py
# @Time    : 2025/11/14 09:20
# @Software: PyCharm
"""
无向图与节点特征 | Undirected graphs and node features

边以无序对存储（u < v），不允许自环与重边。所有算子均为稠密矩阵。
Edges are stored as unordered pairs (u < v); self-loops and duplicates are rejected. All operators are dense.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import ArgumentError, DegreeError, DimensionError
from relaxuni.linalg.dense import DenseMatrix, as_dense
from relaxuni.schema import LaplacianKind

__all__ = [
    "FeatureMatrix",
    "Graph",
    "complete_graph",
    "cycle_graph",
    "gcn_adjacency",
    "grid_graph",
    "laplacian",
    "normalized_adjacency",
    "random_connected_graph",
    "star_graph",
]


@dataclass(frozen=True)
class Graph:
    """
    Attributes:
        n: Node count
        edges: Sorted tuple of (u, v) with u < v
        weights: Optional positive per-edge weights aligned with `edges` (None = unweighted)
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...] | None = None
    degrees: npt.NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ArgumentError(f"n must be >= 0, got {self.n}", n=self.n)
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if u == v:
                raise ArgumentError(f"self-loop at node {u}", node=u)
            if not (0 <= u < v < self.n):
                raise ArgumentError(f"edge ({u}, {v}) must satisfy 0 <= u < v < n={self.n}", edge=[u, v])
            if (u, v) in seen:
                raise ArgumentError(f"duplicate edge ({u}, {v})", edge=[u, v])
            seen.add((u, v))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise DimensionError("weights must align with edges", edges=len(self.edges), weights=len(self.weights))
            if any(w <= 0 for w in self.weights):
                raise ArgumentError("edge weights must be positive")
        deg = np.zeros(self.n)
        w = self.edge_weights
        if self.edges:
            idx = np.asarray(self.edges, dtype=np.int64)
            np.add.at(deg, idx[:, 0], w)
            np.add.at(deg, idx[:, 1], w)
        object.__setattr__(self, "degrees", deg)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights: Iterable[float] | None = None) -> Graph:
        """
        从任意方向的边构造；按 (u, v) 排序 | Build from edges in either orientation, sorted by (u, v)
        """
        pairs = [(min(int(u), int(v)), max(int(u), int(v))) if u != v else (int(u), int(v)) for u, v in edges]
        if weights is None:
            return cls(n=n, edges=tuple(sorted(pairs)))
        ws = [float(w) for w in weights]
        if len(ws) != len(pairs):
            raise DimensionError("weights must align with edges", edges=len(pairs), weights=len(ws))
        order = sorted(range(len(pairs)), key=lambda k: pairs[k])
        return cls(n=n, edges=tuple(pairs[k] for k in order), weights=tuple(ws[k] for k in order))

    @property
    def edge_weights(self) -> npt.NDArray[np.float64]:
        if self.weights is None:
            return np.ones(len(self.edges))
        return np.asarray(self.weights, dtype=np.float64)

    @cached_property
    def adjacency(self) -> DenseMatrix:
        a = np.zeros((self.n, self.n))
        if self.edges:
            idx = np.asarray(self.edges, dtype=np.int64)
            a[idx[:, 0], idx[:, 1]] = self.edge_weights
            a[idx[:, 1], idx[:, 0]] = self.edge_weights
        return a

    def isolated_nodes(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.degrees == 0)[0]]


@dataclass(frozen=True)
class FeatureMatrix:
    """
    节点特征 X，第 i 行为 s(i) | Node features X; row i is s(i)
    """

    values: DenseMatrix

    def __post_init__(self) -> None:
        arr = as_dense(self.values, name="features")
        if not np.all(np.isfinite(arr)):
            raise ArgumentError("feature matrix contains non-finite entries")
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_vector(cls, x: npt.ArrayLike) -> FeatureMatrix:
        """长度 n 的向量视为 n×1 | A length-n vector becomes n x 1."""
        arr = np.asarray(x)
        return cls(arr.reshape(-1, 1) if arr.ndim == 1 else arr)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def d(self) -> int:
        return int(self.values.shape[1])


def _require_no_isolated(g: Graph) -> None:
    isolated = g.isolated_nodes()
    if isolated:
        raise DegreeError(f"node {isolated[0]} is isolated", node=isolated[0], isolated=isolated)


def normalized_adjacency(g: Graph) -> DenseMatrix:
    """
    Ã = D^{-1/2} A D^{-1/2}

    Raises:
        DegreeError: If any node has degree 0; context["node"] names the first one

    Example:
        >>> normalized_adjacency(Graph.from_edges(2, [(0, 1)]))
        array([[0., 1.],
               [1., 0.]])
    """
    _require_no_isolated(g)
    inv_sqrt = 1.0 / np.sqrt(g.degrees)
    return inv_sqrt[:, None] * g.adjacency * inv_sqrt[None, :]


def laplacian(g: Graph, kind: LaplacianKind = LaplacianKind.NORMALIZED) -> DenseMatrix:
    """
    归一化 L = I − Ã，或组合 L = D − A | Normalized L = I − Ã, or combinatorial L = D − A
    """
    if kind == LaplacianKind.COMBINATORIAL:
        return np.diag(g.degrees) - g.adjacency
    return np.eye(g.n) - normalized_adjacency(g)


def gcn_adjacency(g: Graph) -> DenseMatrix:
    """
    加自环后的重归一化邻接 D̂^{-1/2}(A + I)D̂^{-1/2}，孤立节点也有定义。
    Self-loop renormalized adjacency D̂^{-1/2}(A + I)D̂^{-1/2}; defined for isolated nodes too.
    """
    a_hat = g.adjacency + np.eye(g.n)
    inv_sqrt = 1.0 / np.sqrt(a_hat.sum(axis=1))
    return inv_sqrt[:, None] * a_hat * inv_sqrt[None, :]


# —— constructors —— #


def grid_graph(rows: int, cols: int) -> Graph:
    """
    4 邻接网格，节点按行优先编号 r·cols + c | 4-neighbor lattice, row-major node ids r·cols + c

    Raises:
        ArgumentError: If rows or cols < 1
    """
    if rows < 1 or cols < 1:
        raise ArgumentError(f"grid dimensions must be >= 1, got {rows}x{cols}", rows=rows, cols=cols)
    edges: list[tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return Graph(n=rows * cols, edges=tuple(sorted(edges)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ArgumentError(f"cycle needs n >= 3, got {n}", n=n)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """中心节点为 0 | Center is node 0."""
    if leaves < 1:
        raise ArgumentError(f"star needs >= 1 leaf, got {leaves}", leaves=leaves)
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """
    随机生成树加 Erdős–Rényi 边，保证连通 | Random spanning tree plus Erdős–Rényi edges; always connected
    """
    if n < 2:
        raise ArgumentError(f"n must be >= 2, got {n}", n=n)
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}", p=p)
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[k]), int(order[rng.integers(0, k)])))) for k in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return Graph.from_edges(n, sorted(edges))  # type: ignore[arg-type]
