# filename: operators.py
# @Time    : 2025/11/15 11:30
# @Software: PyCharm
"""
余切权重、重心面积、内蕴 Delaunay 翻转与网格算子 | Cotangent weights, barycentric areas, intrinsic Delaunay flips
and mesh operators
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy import sparse

from relaxuni.exceptions import (
    DegreeError,
    GeometryError,
    NonterminationError,
    PreconditionError,
    RewiringError,
    UndefinedQuotientError,
)
from relaxuni.graph.rayleigh import rayleigh_quotient_dense
from relaxuni.linalg.dense import DenseMatrix, as_dense
from relaxuni.linalg.sparse import SparseSym
from relaxuni.mesh.intrinsic import IntrinsicMesh
from relaxuni.mesh.trimesh import Edge, TriMesh, check_manifold, edge_face_map, sorted_edge
from relaxuni.schema import MeshOrigin

__all__ = [
    "DELAUNAY_TOL",
    "MeshOperators",
    "RewiringReport",
    "barycentric_areas",
    "cotangent_laplacian",
    "cotangent_weights",
    "delaunay_violations",
    "intrinsic_delaunay_flip",
    "mesh_operators",
    "mesh_rayleigh_quotient",
    "mesh_rayleigh_quotient_edge_form",
]

DELAUNAY_TOL = 1e-10
# 翻转后允许的负权重舍入误差 | rounding slack for weights after flipping
WEIGHT_TOL = 1e-10
FLIP_CAP_FACTOR = 10


def _intrinsic(mesh: TriMesh | IntrinsicMesh) -> IntrinsicMesh:
    return mesh if isinstance(mesh, IntrinsicMesh) else IntrinsicMesh.from_trimesh(mesh)


def cotangent_weights(mesh: TriMesh | IntrinsicMesh) -> SparseSym:
    """
    W_ij = ½(cot α_ij + cot β_ij)，边界边为 ½ cot α_ij；对角线为负行和。
    W_ij = ½(cot α_ij + cot β_ij), ½ cot α_ij on boundary edges; the diagonal is minus the row sum.

    Raises:
        GeometryError: If a face is degenerate; context["face"] names it

    Example:
        Two equilateral triangles sharing an edge give 1/√3 on the shared edge.
    """
    im = _intrinsic(mesh)
    weights: dict[Edge, float] = dict.fromkeys(im.edges, 0.0)
    for f, (i, j, k) in enumerate(im.faces):
        cot_i, cot_j, cot_k = im.face_cotangents(f)
        weights[sorted_edge(j, k)] += 0.5 * cot_i
        weights[sorted_edge(k, i)] += 0.5 * cot_j
        weights[sorted_edge(i, j)] += 0.5 * cot_k
    return SparseSym.from_entries(im.n, weights)


def barycentric_areas(mesh: TriMesh | IntrinsicMesh) -> npt.NDArray[np.float64]:
    """
    A_i = Σ_{f ∋ i} area(f) / 3

    Raises:
        GeometryError: If a face has zero area, or a vertex belongs to no face
    """
    im = _intrinsic(mesh)
    areas = np.zeros(im.n)
    for f, face in enumerate(im.faces):
        area = im.face_area(f)
        if area <= 0.0:
            raise GeometryError(f"face {f} has zero area", face=f)
        for v in face:
            areas[v] += area / 3.0
    lonely = np.nonzero(areas <= 0.0)[0]
    if len(lonely):
        raise GeometryError(f"vertex {int(lonely[0])} belongs to no face", vertex=int(lonely[0]))
    return areas


def delaunay_violations(mesh: TriMesh | IntrinsicMesh, tol: float = DELAUNAY_TOL) -> list[Edge]:
    """
    内部边上对角和 α + β > π + tol 的边 | Interior edges whose opposite angles sum above π + tol
    """
    im = _intrinsic(mesh)
    return sorted(e for e, angles in im.opposite_angles().items() if len(angles) == 2 and angles[0] + angles[1] > math.pi + tol)


def _third_vertex(face: tuple[int, int, int], u: int, v: int) -> int:
    return next(w for w in face if w != u and w != v)


def _oriented(face: tuple[int, int, int], u: int, v: int) -> tuple[int, int]:
    """把 (u, v) 排成面内循环顺序 | order (u, v) as they appear cyclically in `face`"""
    a, b, c = face
    return (u, v) if (a, b) == (u, v) or (b, c) == (u, v) or (c, a) == (u, v) else (v, u)


def _unfolded_length(l_ij: float, l_ik: float, l_jk: float, l_im: float, l_jm: float) -> float:
    # i 在原点，j 在 x 轴上；k 在上半平面，m 在下半平面 | i at the origin, j on the x axis, k above, m below
    kx = (l_ik * l_ik - l_jk * l_jk + l_ij * l_ij) / (2.0 * l_ij)
    ky = math.sqrt(max(l_ik * l_ik - kx * kx, 0.0))
    mx = (l_im * l_im - l_jm * l_jm + l_ij * l_ij) / (2.0 * l_ij)
    my = -math.sqrt(max(l_im * l_im - mx * mx, 0.0))
    return math.hypot(kx - mx, ky - my)


def intrinsic_delaunay_flip(mesh: TriMesh | IntrinsicMesh, tol: float = DELAUNAY_TOL) -> IntrinsicMesh:
    """
    反复翻转违反 Delaunay 条件的内部边，直到没有违例。
    Flip violating interior edges until none remain.

    The new diagonal's intrinsic length comes from unfolding the two triangles into the plane. Vertex count,
    face count, Euler characteristic and total area are preserved.

    Raises:
        RewiringError: If the quad around a violating edge has a repeated corner or its diagonal already exists
        NonterminationError: If more than 10·|E| flips are needed
    """
    im = _intrinsic(mesh)
    faces = [tuple(f) for f in im.faces]
    lengths = dict(im.edge_lengths)
    incident = edge_face_map(faces)
    cap = FLIP_CAP_FACTOR * max(len(incident), 1)

    def angle_sum(e: Edge) -> float:
        total = 0.0
        for f in incident[e]:
            k = _third_vertex(faces[f], *e)
            a, b, c = lengths[e], lengths[sorted_edge(e[0], k)], lengths[sorted_edge(e[1], k)]
            total += math.acos(min(1.0, max(-1.0, (b * b + c * c - a * a) / (2.0 * b * c))))
        return total

    stack = [e for e, fs in incident.items() if len(fs) == 2]
    flips = 0
    while stack:
        e = stack.pop()
        if e not in incident or len(incident[e]) != 2 or angle_sum(e) <= math.pi + tol:
            continue
        if flips >= cap:
            raise NonterminationError(f"edge flipping exceeded {cap} flips", cap=cap, flips=flips)
        f1, f2 = incident[e]
        i, j = _oriented(faces[f1], *e)
        k = _third_vertex(faces[f1], i, j)
        m = _third_vertex(faces[f2], i, j)
        new_edge = sorted_edge(k, m)
        if k == m or new_edge in incident:
            raise RewiringError(f"edge {e} is not flippable", edge=list(e), quad=[i, j, k, m])
        new_length = _unfolded_length(
            lengths[e],
            lengths[sorted_edge(i, k)],
            lengths[sorted_edge(j, k)],
            lengths[sorted_edge(i, m)],
            lengths[sorted_edge(j, m)],
        )
        # 四边形逆时针顺序 i, m, j, k | quad in cyclic order i, m, j, k
        faces[f1] = (i, m, k)
        faces[f2] = (m, j, k)
        del incident[e], lengths[e]
        incident[new_edge] = [f1, f2]
        lengths[new_edge] = new_length
        incident[sorted_edge(j, k)] = [f2 if f == f1 else f for f in incident[sorted_edge(j, k)]]
        incident[sorted_edge(i, m)] = [f1 if f == f2 else f for f in incident[sorted_edge(i, m)]]
        flips += 1
        stack.extend(sorted_edge(a, b) for a, b in ((i, k), (j, k), (i, m), (j, m)))

    logger.debug(f"intrinsic flips done flips={flips} edges={len(incident)}")
    return IntrinsicMesh(
        n=im.n,
        faces=[(int(a), int(b), int(c)) for a, b, c in faces],
        edge_lengths=lengths,
        origin=MeshOrigin.REWIRED,
        flips=im.flips + flips,
        name=im.name,
    )


@dataclass
class RewiringReport:
    flips: int
    violations_before: list[Edge] = field(default_factory=list)
    violations_after: list[Edge] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "flips": self.flips,
            "violations_before": [list(e) for e in self.violations_before],
            "violations_after": [list(e) for e in self.violations_after],
        }


@dataclass
class MeshOperators:
    """
    Attributes:
        mesh: The (possibly rewired) intrinsic mesh the operators live on
        cot_weights: Cotangent weights W
        areas: Barycentric areas A_i
        weighted_degrees: D_ii = Σ_j W_ij
        normalized_adjacency: Ã = D^{-1/2}(W ⊙ A)D^{-1/2}
        rewiring: Flip report when rewiring was requested
    """

    mesh: IntrinsicMesh
    cot_weights: SparseSym
    areas: npt.NDArray[np.float64]
    weighted_degrees: npt.NDArray[np.float64]
    normalized_adjacency: DenseMatrix
    rewiring: RewiringReport | None = None

    @property
    def n(self) -> int:
        return self.mesh.n

    def to_dict(self) -> dict[str, Any]:
        """{edges: [[i, j, w]], areas: [...]}"""
        payload: dict[str, Any] = {
            "edges": [[i, j, w] for i, j, w in self.cot_weights],
            "areas": self.areas.tolist(),
        }
        if self.rewiring is not None:
            payload["rewiring"] = self.rewiring.to_dict()
        return payload


def mesh_operators(mesh: TriMesh | IntrinsicMesh, rewire: bool = True) -> MeshOperators:
    """
    组装 W、A_i、加权度与 Ã | Assemble W, A_i, weighted degrees and Ã

    Args:
        mesh: Manifold triangle mesh
        rewire: Apply intrinsic Delaunay flips first

    Raises:
        GeometryError: If the mesh is not manifold (context carries the manifold report)
        PreconditionError: If rewire is False and the Delaunay criterion fails, or weights stay negative
        DegreeError: If a vertex has non-positive weighted degree
    """
    report = check_manifold(mesh)
    if not report.is_manifold:
        raise GeometryError("mesh is not manifold", report=report.to_dict())
    im = _intrinsic(mesh)
    before = delaunay_violations(im)
    rewiring = None
    if rewire:
        im = intrinsic_delaunay_flip(im)
        rewiring = RewiringReport(flips=im.flips, violations_before=before, violations_after=delaunay_violations(im))
        logger.info(f"mesh rewired name={im.name} flips={im.flips} violations_before={len(before)}")
    elif before:
        raise PreconditionError(
            f"{len(before)} edges violate the Delaunay criterion; enable rewiring",
            edges=[list(e) for e in before],
        )

    w = cotangent_weights(im)
    negative = w.negative_entries(WEIGHT_TOL)
    if negative:
        raise PreconditionError(f"{len(negative)} negative cotangent weights", edges=[list(e) for e in negative])
    degrees = w.off_diagonal_row_sums()
    bad = np.nonzero(degrees <= 0.0)[0]
    if len(bad):
        raise DegreeError(f"vertex {int(bad[0])} has non-positive weighted degree", node=int(bad[0]))
    inv_sqrt = 1.0 / np.sqrt(degrees)
    a_norm = inv_sqrt[:, None] * w.to_dense(with_diagonal=False) * inv_sqrt[None, :]
    # 对称化以消除舍入 | symmetrize away rounding
    a_norm = 0.5 * (a_norm + a_norm.T)
    return MeshOperators(
        mesh=im,
        cot_weights=w,
        areas=barycentric_areas(im),
        weighted_degrees=degrees,
        normalized_adjacency=a_norm,
        rewiring=rewiring,
    )


def cotangent_laplacian(ops: MeshOperators) -> sparse.csr_matrix:
    """
    面积归一化的余切拉普拉斯 (L u)_i = (1/A_i) Σ_j W_ij (u_j − u_i)，谱非正。
    Area-normalized cotangent Laplacian (L u)_i = (1/A_i) Σ_j W_ij (u_j − u_i); its spectrum is nonpositive.
    """
    return sparse.diags(1.0 / ops.areas).dot(ops.cot_weights.to_scipy(with_diagonal=True)).tocsr()


def mesh_rayleigh_quotient(ops: MeshOperators, x: npt.ArrayLike) -> float:
    """
    tr(X^†(I − Ã)X)/‖X‖_F²，Ã 为加权归一化邻接 | with Ã the weighted normalized adjacency

    Raises:
        UndefinedQuotientError: If all features are zero
    """
    arr = np.asarray(x)
    values = as_dense(arr.reshape(-1, 1) if arr.ndim == 1 else arr, name="features")
    return rayleigh_quotient_dense(ops.normalized_adjacency, values)


def mesh_rayleigh_quotient_edge_form(ops: MeshOperators, x: npt.ArrayLike) -> float:
    """加权边求和形式（有序对），d_u 为加权度 | Weighted ordered-pair edge sum with weighted degrees d_u"""
    arr = np.asarray(x)
    values = as_dense(arr.reshape(-1, 1) if arr.ndim == 1 else arr, name="features")
    denom = float(np.sum(np.abs(values) ** 2))
    if denom == 0.0:
        raise UndefinedQuotientError("Rayleigh quotient of all-zero features is undefined")
    scaled = values / np.sqrt(ops.weighted_degrees)[:, None]
    w = ops.cot_weights
    diff = scaled[w.rows] - scaled[w.cols]
    ordered = 2.0 * float(np.sum(w.values * np.sum(np.abs(diff) ** 2, axis=1)))
    return 0.5 * ordered / denom
