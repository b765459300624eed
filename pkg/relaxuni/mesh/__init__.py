"""
三角网格几何、内蕴 Delaunay 翻转与网格 Rayleigh 商 | Triangle-mesh geometry, intrinsic Delaunay flips and
the mesh Rayleigh quotient
"""

from relaxuni.mesh.intrinsic import IntrinsicMesh, corner_angle, corner_cotangent, triangle_area
from relaxuni.mesh.io import load_mesh, read_obj, read_off, save_mesh, write_obj, write_off
from relaxuni.mesh.operators import (
    DELAUNAY_TOL,
    MeshOperators,
    RewiringReport,
    barycentric_areas,
    cotangent_laplacian,
    cotangent_weights,
    delaunay_violations,
    intrinsic_delaunay_flip,
    mesh_operators,
    mesh_rayleigh_quotient,
    mesh_rayleigh_quotient_edge_form,
)
from relaxuni.mesh.shapes import flat_grid_patch, icosahedron, icosphere, perturbed_sphere, torus, two_triangles
from relaxuni.mesh.trimesh import Edge, ManifoldReport, TriMesh, check_manifold, edge_face_map, euler_characteristic

__all__ = [
    "DELAUNAY_TOL",
    "Edge",
    "IntrinsicMesh",
    "ManifoldReport",
    "MeshOperators",
    "RewiringReport",
    "TriMesh",
    "barycentric_areas",
    "check_manifold",
    "corner_angle",
    "corner_cotangent",
    "cotangent_laplacian",
    "cotangent_weights",
    "delaunay_violations",
    "edge_face_map",
    "euler_characteristic",
    "flat_grid_patch",
    "icosahedron",
    "icosphere",
    "intrinsic_delaunay_flip",
    "load_mesh",
    "mesh_operators",
    "mesh_rayleigh_quotient",
    "mesh_rayleigh_quotient_edge_form",
    "perturbed_sphere",
    "read_obj",
    "read_off",
    "save_mesh",
    "torus",
    "triangle_area",
    "two_triangles",
    "write_obj",
    "write_off",
]
