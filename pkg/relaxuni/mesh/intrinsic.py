# filename: intrinsic.py
# @Time    : 2025/11/15 10:02
# @Software: PyCharm
"""
内蕴网格：只由连接关系与边长描述 | Intrinsic meshes described by connectivity and edge lengths alone

所有几何量（角度、面积、余切）都由边长通过余弦定理和 Heron 公式得到，因此嵌入网格与翻转后的网格使用同一套代码。
Every geometric quantity (angles, areas, cotangents) comes from edge lengths through the law of cosines and
Heron's formula, so embedded and flipped meshes share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import ArgumentError, GeometryError
from relaxuni.mesh.trimesh import Edge, TriMesh, edge_face_map, euler_characteristic, sorted_edge
from relaxuni.schema import MeshOrigin

__all__ = ["IntrinsicMesh", "corner_cotangent", "corner_angle", "triangle_area"]

Face = tuple[int, int, int]


def triangle_area(a: float, b: float, c: float) -> float:
    """
    数值稳定的 Heron 公式（边长降序排列）| Numerically stable Heron formula (lengths sorted descending)
    """
    a, b, c = sorted((a, b, c), reverse=True)
    product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(max(product, 0.0))


def corner_angle(opposite: float, b: float, c: float) -> float:
    """对边为 `opposite` 的内角 | Interior angle facing the side `opposite`"""
    cos = (b * b + c * c - opposite * opposite) / (2.0 * b * c)
    return math.acos(min(1.0, max(-1.0, cos)))


def corner_cotangent(opposite: float, b: float, c: float, area: float) -> float:
    """cot θ = (b² + c² − a²) / (4·area)"""
    return (b * b + c * c - opposite * opposite) / (4.0 * area)


@dataclass
class IntrinsicMesh:
    """
    Attributes:
        n: Vertex count
        faces: Vertex-index triples
        edge_lengths: Positive length per unordered edge
        origin: EMBEDDED when lengths come from coordinates, REWIRED after edge flips
        flips: Number of edge flips applied to reach this mesh
    """

    n: int
    faces: list[Face]
    edge_lengths: dict[Edge, float]
    origin: MeshOrigin = MeshOrigin.EMBEDDED
    flips: int = 0
    name: str = field(default="mesh", compare=False)

    def __post_init__(self) -> None:
        incident = edge_face_map(self.faces)
        missing = [e for e in incident if e not in self.edge_lengths]
        if missing:
            raise ArgumentError(f"{len(missing)} face edges have no length", edges=missing[:10])
        for e, length in self.edge_lengths.items():
            if not length > 0.0 or not math.isfinite(length):
                raise GeometryError(f"edge {e} has non-positive length {length}", edge=list(e))
        for f in range(len(self.faces)):
            a, b, c = self.face_lengths(f)
            # 严格三角不等式 | strict triangle inequality
            if a >= b + c or b >= a + c or c >= a + b:
                raise GeometryError(f"face {f} violates the triangle inequality", face=f, lengths=[a, b, c])

    @classmethod
    def from_trimesh(cls, mesh: TriMesh) -> IntrinsicMesh:
        faces = [(int(a), int(b), int(c)) for a, b, c in mesh.faces.tolist()]
        return cls(n=mesh.n, faces=faces, edge_lengths=dict(mesh.edge_lengths), name=mesh.name)

    @property
    def edges(self) -> list[Edge]:
        return sorted(edge_face_map(self.faces))

    def length(self, u: int, v: int) -> float:
        return self.edge_lengths[sorted_edge(u, v)]

    def face_lengths(self, f: int) -> tuple[float, float, float]:
        """(l_jk, l_ki, l_ij)，即各角对边的长度 | lengths opposite corners i, j, k of face (i, j, k)"""
        i, j, k = self.faces[f]
        return self.length(j, k), self.length(k, i), self.length(i, j)

    def face_area(self, f: int) -> float:
        return triangle_area(*self.face_lengths(f))

    def face_areas(self) -> npt.NDArray[np.float64]:
        return np.array([self.face_area(f) for f in range(len(self.faces))])

    def total_area(self) -> float:
        return float(self.face_areas().sum())

    def euler_characteristic(self) -> int:
        return euler_characteristic(self.n, self.faces)

    def face_cotangents(self, f: int, *, tol: float = 1e-14) -> tuple[float, float, float]:
        """
        面 f 三个角的余切 | Cotangents of the three corners of face f

        Raises:
            GeometryError: If the face is degenerate (an angle of 0 or π)
        """
        a, b, c = self.face_lengths(f)
        area = triangle_area(a, b, c)
        if area <= tol * max(a, b, c) ** 2:
            raise GeometryError(f"face {f} is degenerate", face=f, lengths=[a, b, c])
        return corner_cotangent(a, b, c, area), corner_cotangent(b, c, a, area), corner_cotangent(c, a, b, area)

    def opposite_angles(self) -> dict[Edge, list[float]]:
        """每条边在各相邻面中所对的角 | Angle opposite each edge in each incident face"""
        angles: dict[Edge, list[float]] = {}
        for f, (i, j, k) in enumerate(self.faces):
            a, b, c = self.face_lengths(f)
            for edge, angle in (
                (sorted_edge(j, k), corner_angle(a, b, c)),
                (sorted_edge(k, i), corner_angle(b, c, a)),
                (sorted_edge(i, j), corner_angle(c, a, b)),
            ):
                angles.setdefault(edge, []).append(angle)
        return angles

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "faces": [list(f) for f in self.faces],
            "edges": [[a, b, self.edge_lengths[(a, b)]] for a, b in self.edges],
            "origin": self.origin.value,
            "flips": self.flips,
        }
