# filename: io.py
# @Time    : 2025/11/15 14:20
# @Software: PyCharm
"""
OFF / OBJ 读写（仅三角面）| OFF and OBJ readers and writers, triangles only
"""

from pathlib import Path

import numpy as np
from loguru import logger

from relaxuni.exceptions import FormatError
from relaxuni.mesh.trimesh import TriMesh
from relaxuni.utils import require_file

__all__ = ["load_mesh", "read_obj", "read_off", "save_mesh", "write_obj", "write_off"]


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def read_off(path: str | Path) -> TriMesh:
    """
    Raises:
        MissingInputError: If the file does not exist
        FormatError: On a malformed header, short vertex/face blocks, or non-triangular faces
    """
    path = require_file(path)
    lines = _content_lines(path.read_text(encoding="utf-8"))
    if not lines or not lines[0].startswith("OFF"):
        raise FormatError(f"{path}: missing OFF header", path=str(path))
    header = lines[0][3:].split() or (lines.pop(1).split() if len(lines) > 1 else [])
    try:
        nv, nf = int(header[0]), int(header[1])
    except (IndexError, ValueError) as e:
        raise FormatError(f"{path}: bad OFF counts line", path=str(path)) from e
    body = lines[1:]
    if len(body) < nv + nf:
        raise FormatError(f"{path}: expected {nv} vertices and {nf} faces", path=str(path))
    try:
        positions = np.array([[float(v) for v in body[i].split()[:3]] for i in range(nv)])
        faces = []
        for i in range(nf):
            parts = [int(v) for v in body[nv + i].split()]
            if parts[0] != 3 or len(parts) < 4:
                raise FormatError(f"{path}: face {i} has {parts[0]} vertices; only triangles are supported", path=str(path), face=i)
            faces.append(parts[1:4])
    except ValueError as e:
        raise FormatError(f"{path}: malformed number", path=str(path), detail=str(e)) from e
    logger.debug(f"read off path={path} vertices={nv} faces={nf}")
    return TriMesh(positions=positions.reshape(-1, 3), faces=np.array(faces, dtype=np.int64).reshape(-1, 3), name=path.stem)


def read_obj(path: str | Path) -> TriMesh:
    """
    只读取 `v` 与 `f` 行；`f a/b/c` 取首个索引，支持负索引。
    Reads `v` and `f` lines only; `f a/b/c` uses the first index, negative indices are relative.
    """
    path = require_file(path)
    positions: list[list[float]] = []
    faces: list[list[int]] = []
    for lineno, line in enumerate(_content_lines(path.read_text(encoding="utf-8")), start=1):
        tag, *rest = line.split()
        try:
            if tag == "v":
                positions.append([float(v) for v in rest[:3]])
            elif tag == "f":
                if len(rest) != 3:
                    raise FormatError(f"{path}: face on line {lineno} has {len(rest)} vertices; only triangles are supported", path=str(path))
                idx = [int(tok.split("/")[0]) for tok in rest]
                faces.append([i - 1 if i > 0 else len(positions) + i for i in idx])
        except ValueError as e:
            raise FormatError(f"{path}: malformed line {lineno}", path=str(path), detail=str(e)) from e
    return TriMesh(positions=np.array(positions).reshape(-1, 3), faces=np.array(faces, dtype=np.int64).reshape(-1, 3), name=path.stem)


def write_off(mesh: TriMesh, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = ["OFF", f"{mesh.n} {len(mesh.faces)} {len(mesh.edges)}"]
    rows += [" ".join(repr(float(c)) for c in p) for p in mesh.positions]
    rows += [f"3 {a} {b} {c}" for a, b, c in mesh.faces.tolist()]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def write_obj(mesh: TriMesh, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = ["v " + " ".join(repr(float(c)) for c in p) for p in mesh.positions]
    rows += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces.tolist()]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def load_mesh(path: str | Path) -> TriMesh:
    """按后缀选择读取器 | Dispatch on the file suffix"""
    suffix = Path(path).suffix.lower()
    if suffix == ".off":
        return read_off(path)
    if suffix == ".obj":
        return read_obj(path)
    raise FormatError(f"unsupported mesh format: {suffix}", path=str(path))


def save_mesh(mesh: TriMesh, path: str | Path) -> Path:
    suffix = Path(path).suffix.lower()
    if suffix == ".off":
        return write_off(mesh, path)
    if suffix == ".obj":
        return write_obj(mesh, path)
    raise FormatError(f"unsupported mesh format: {suffix}", path=str(path))
