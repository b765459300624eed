# filename: shapes.py
# @Time    : 2025/11/15 15:05
# @Software: PyCharm
"""
内置网格 | Built-in meshes

所有闭合网格的面均朝外定向 | Closed meshes have outward-oriented faces.
"""

import math

import numpy as np

from relaxuni.exceptions import ArgumentError
from relaxuni.mesh.trimesh import TriMesh

__all__ = ["flat_grid_patch", "icosahedron", "icosphere", "perturbed_sphere", "torus", "two_triangles"]

_PHI = (1.0 + math.sqrt(5.0)) / 2.0

_ICO_VERTICES = np.array(
    [
        [-1, _PHI, 0],
        [1, _PHI, 0],
        [-1, -_PHI, 0],
        [1, -_PHI, 0],
        [0, -1, _PHI],
        [0, 1, _PHI],
        [0, -1, -_PHI],
        [0, 1, -_PHI],
        [_PHI, 0, -1],
        [_PHI, 0, 1],
        [-_PHI, 0, -1],
        [-_PHI, 0, 1],
    ],
    dtype=np.float64,
)

_ICO_FACES = np.array(
    [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ],
    dtype=np.int64,
)  # fmt: skip


def icosahedron(edge_length: float = 1.0) -> TriMesh:
    """正二十面体；标准顶点的边长为 2 | Regular icosahedron; the canonical vertices have edge length 2."""
    if edge_length <= 0:
        raise ArgumentError(f"edge_length must be > 0, got {edge_length}")
    return TriMesh(positions=_ICO_VERTICES * (edge_length / 2.0), faces=_ICO_FACES.copy(), name="icosahedron")


def icosphere(subdivisions: int = 2, radius: float = 1.0) -> TriMesh:
    """
    二十面体逐次四分并投影到球面 | Icosahedron split 1-to-4 per level and projected to the sphere

    Vertex count is 10·4^s + 2.
    """
    if subdivisions < 0:
        raise ArgumentError(f"subdivisions must be >= 0, got {subdivisions}")
    verts = [v / np.linalg.norm(v) for v in _ICO_VERTICES]
    faces = [tuple(f) for f in _ICO_FACES.tolist()]
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            if key not in midpoint:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        refined = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            refined += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = refined
    return TriMesh(positions=np.array(verts) * radius, faces=np.array(faces, dtype=np.int64), name=f"icosphere{subdivisions}")


def perturbed_sphere(subdivisions: int, amplitude: float, rng: np.random.Generator) -> TriMesh:
    """
    半径随机扰动的 icosphere，通常违反 Delaunay 条件 | Icosphere with random radial noise; usually non-Delaunay
    """
    if not 0.0 <= amplitude < 1.0:
        raise ArgumentError(f"amplitude must lie in [0, 1), got {amplitude}")
    base = icosphere(subdivisions)
    scale = 1.0 + amplitude * rng.uniform(-1.0, 1.0, size=base.n)
    return TriMesh(positions=base.positions * scale[:, None], faces=base.faces, name=f"perturbed_sphere{subdivisions}")


def torus(major_radius: float = 1.0, minor_radius: float = 0.4, nu: int = 24, nv: int = 12) -> TriMesh:
    """
    环面，nu×nv 个顶点，每个网格四边形切成两个三角形 | Torus with nu×nv vertices, two triangles per quad
    """
    if nu < 3 or nv < 3:
        raise ArgumentError(f"torus needs nu, nv >= 3, got {nu}, {nv}")
    if not 0.0 < minor_radius < major_radius:
        raise ArgumentError("torus needs 0 < minor_radius < major_radius")
    u = 2.0 * np.pi * np.arange(nu) / nu
    v = 2.0 * np.pi * np.arange(nv) / nv
    uu, vv = np.meshgrid(u, v, indexing="ij")
    ring = major_radius + minor_radius * np.cos(vv)
    positions = np.stack([ring * np.cos(uu), ring * np.sin(uu), minor_radius * np.sin(vv)], axis=-1).reshape(-1, 3)
    faces = []
    for i in range(nu):
        for j in range(nv):
            a = i * nv + j
            b = ((i + 1) % nu) * nv + j
            c = ((i + 1) % nu) * nv + (j + 1) % nv
            d = i * nv + (j + 1) % nv
            faces += [(a, b, c), (a, c, d)]
    return TriMesh(positions=positions, faces=np.array(faces, dtype=np.int64), name="torus")


def flat_grid_patch(rows: int, cols: int, spacing: float = 1.0, jitter: float = 0.0, rng: np.random.Generator | None = None) -> TriMesh:
    """
    z = 0 平面上的 rows×cols 顶点网格；`jitter` 只扰动内部顶点。
    A rows×cols vertex grid in the z = 0 plane; `jitter` moves interior vertices only.
    """
    if rows < 2 or cols < 2:
        raise ArgumentError(f"patch needs rows, cols >= 2, got {rows}x{cols}")
    ys, xs = np.meshgrid(np.arange(rows, dtype=np.float64), np.arange(cols, dtype=np.float64), indexing="ij")
    positions = np.stack([xs * spacing, ys * spacing, np.zeros_like(xs)], axis=-1).reshape(-1, 3)
    if jitter > 0.0:
        if rng is None:
            raise ArgumentError("jitter requires an rng")
        interior = np.array([r * cols + c for r in range(1, rows - 1) for c in range(1, cols - 1)], dtype=np.int64)
        if len(interior):
            positions[interior, :2] += jitter * spacing * rng.uniform(-1.0, 1.0, size=(len(interior), 2))
    faces = []
    for r in range(rows - 1):
        for c in range(cols - 1):
            a = r * cols + c
            faces += [(a, a + 1, a + cols + 1), (a, a + cols + 1, a + cols)]
    return TriMesh(positions=positions, faces=np.array(faces, dtype=np.int64), name="flat_patch")


def two_triangles(apex_height: float = math.sqrt(3.0) / 2.0) -> TriMesh:
    """
    共享底边 (0,0)-(1,0) 的两个等腰三角形，顶点位于 (½, ±h)；默认 h 给出两个正三角形。
    Two isosceles triangles sharing the base (0,0)-(1,0) with apexes at (½, ±h); the default h gives an
    equilateral pair. A small h makes the shared edge violate the Delaunay criterion.
    """
    if apex_height <= 0:
        raise ArgumentError(f"apex_height must be > 0, got {apex_height}")
    positions = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, apex_height, 0.0], [0.5, -apex_height, 0.0]])
    return TriMesh(positions=positions, faces=np.array([[0, 1, 2], [1, 0, 3]], dtype=np.int64), name="two_triangles")
