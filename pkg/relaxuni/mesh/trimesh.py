# filename: trimesh.py
# @Time    : 2025/11/15 09:10
# @Software: PyCharm
"""
嵌入三角网格与流形检查 | Embedded triangle meshes and the manifold check
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt

from relaxuni.exceptions import ArgumentError, DimensionError

__all__ = ["Edge", "ManifoldReport", "TriMesh", "check_manifold", "edge_face_map", "euler_characteristic", "sorted_edge"]

Edge = tuple[int, int]


def sorted_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def edge_face_map(faces: Sequence[Sequence[int]]) -> dict[Edge, list[int]]:
    """每条无序边所属的面索引 | Face indices incident to each unordered edge"""
    incident: dict[Edge, list[int]] = defaultdict(list)
    for f, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            incident[sorted_edge(int(u), int(v))].append(f)
    return dict(incident)


def _validate_faces(n: int, faces: npt.NDArray[np.int64]) -> None:
    if faces.ndim != 2 or faces.shape[1] != 3:
        raise DimensionError(f"faces must be F x 3, got {faces.shape}", shape=faces.shape)
    if faces.size and (faces.min() < 0 or faces.max() >= n):
        raise ArgumentError(f"face index outside [0, {n})", n=n)
    for f, (a, b, c) in enumerate(faces.tolist()):
        if a == b or b == c or a == c:
            raise ArgumentError(f"face {f} repeats a vertex", face=f, vertices=[a, b, c])


@dataclass(frozen=True)
class TriMesh:
    """
    Attributes:
        positions: n×3 vertex coordinates
        faces: F×3 vertex-index triples
    """

    positions: npt.NDArray[np.float64]
    faces: npt.NDArray[np.int64]
    name: str = field(default="mesh", compare=False)

    def __post_init__(self) -> None:
        pos = np.ascontiguousarray(self.positions, dtype=np.float64)
        faces = np.ascontiguousarray(self.faces, dtype=np.int64)
        if faces.size == 0:
            faces = np.zeros((0, 3), dtype=np.int64)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise DimensionError(f"positions must be n x 3, got {pos.shape}", shape=pos.shape)
        _validate_faces(pos.shape[0], faces)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "faces", faces)

    @property
    def n(self) -> int:
        return int(self.positions.shape[0])

    @cached_property
    def edges(self) -> list[Edge]:
        return sorted(edge_face_map(self.faces.tolist()))

    @cached_property
    def edge_lengths(self) -> dict[Edge, float]:
        return {(a, b): float(np.linalg.norm(self.positions[a] - self.positions[b])) for a, b in self.edges}

    def face_areas(self) -> npt.NDArray[np.float64]:
        p = self.positions
        cross = np.cross(p[self.faces[:, 1]] - p[self.faces[:, 0]], p[self.faces[:, 2]] - p[self.faces[:, 0]])
        return 0.5 * np.linalg.norm(cross, axis=1)

    def surface_area(self) -> float:
        return float(self.face_areas().sum())


def euler_characteristic(n: int, faces: Sequence[Sequence[int]]) -> int:
    """V − E + F"""
    return n - len(edge_face_map(faces)) + len(faces)


@dataclass
class ManifoldReport:
    """
    流形检查结果；空报告即流形 | Manifold check result; an empty report means manifold

    Attributes:
        bad_edges: (edge, face count) for edges in neither 1 nor 2 faces
        bad_vertices: Vertices whose incident faces do not form a single fan or loop
        boundary_edges: Number of edges in exactly one face
    """

    bad_edges: list[tuple[Edge, int]] = field(default_factory=list)
    bad_vertices: list[int] = field(default_factory=list)
    boundary_edges: int = 0

    @property
    def is_manifold(self) -> bool:
        return not self.bad_edges and not self.bad_vertices

    def to_dict(self) -> dict[str, Any]:
        return {
            "is_manifold": self.is_manifold,
            "bad_edges": [[list(e), c] for e, c in self.bad_edges],
            "bad_vertices": list(self.bad_vertices),
            "boundary_edges": self.boundary_edges,
        }


def _single_fan(link: list[Edge]) -> bool:
    # 顶点的 link 必须连通，且至多两个端点（扇）或没有端点（环）
    # the link must be connected with 0 (loop) or 2 (fan) endpoints
    adjacency: dict[int, set[int]] = defaultdict(set)
    for a, b in link:
        adjacency[a].add(b)
        adjacency[b].add(a)
    if any(len(nb) > 2 for nb in adjacency.values()):
        return False
    endpoints = sum(1 for nb in adjacency.values() if len(nb) == 1)
    if endpoints not in (0, 2):
        return False
    start = next(iter(adjacency))
    seen = {start}
    stack = [start]
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(adjacency)


def check_manifold(mesh: TriMesh | Any) -> ManifoldReport:
    """
    检查每条边恰属于 1 或 2 个面，且每个顶点的邻面构成单个扇或环。
    Check that every edge lies in one or two faces and every vertex's incident faces form one fan or loop.

    Accepts any object with `n` and `faces` (embedded or intrinsic meshes).
    """
    faces = [tuple(int(v) for v in f) for f in (mesh.faces.tolist() if hasattr(mesh.faces, "tolist") else mesh.faces)]
    report = ManifoldReport()
    for e, incident in sorted(edge_face_map(faces).items()):
        if len(incident) == 1:
            report.boundary_edges += 1
        elif len(incident) != 2:
            report.bad_edges.append((e, len(incident)))
    links: dict[int, list[Edge]] = defaultdict(list)
    for a, b, c in faces:
        links[a].append((b, c))
        links[b].append((c, a))
        links[c].append((a, b))
    for v in sorted(links):
        if not _single_fan(links[v]):
            report.bad_vertices.append(v)
    return report
