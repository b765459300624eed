# filename: checkpoint.py
# @Time    : 2025/11/18 14:00
# @Software: PyCharm
"""
检查点：JSON 结构描述 + 二进制参数张量 | Checkpoints: JSON spec plus binary parameter tensors

<path>          {"format": 1, "spec": ModelSpec, "tensors": "<file name>", "extra": {...}}
<path>.params   magic "PRMS" | u32 version=1 | u64 count | per tensor:
                u32 name_len | name utf-8 | u64 rows | u64 cols | u8 complex | <f8 or <c16 data (row-major)
"""

import struct
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import ValidationError

from relaxuni.exceptions import FormatError
from relaxuni.layers.model import Model, build_model
from relaxuni.layers.spec import ModelSpec
from relaxuni.utils import read_json, require_file, write_json

__all__ = ["load_checkpoint", "read_tensors", "save_checkpoint", "write_tensors"]

CHECKPOINT_FORMAT = 1
_MAGIC = b"PRMS"
_VERSION = 1
_HEADER = struct.Struct("<4sIQ")
_NAME_LEN = struct.Struct("<I")
_TENSOR = struct.Struct("<QQB")


def write_tensors(tensors: dict[str, np.ndarray], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, len(tensors)))
        for name, value in tensors.items():
            encoded = name.encode("utf-8")
            is_complex = np.iscomplexobj(value)
            fh.write(_NAME_LEN.pack(len(encoded)))
            fh.write(encoded)
            fh.write(_TENSOR.pack(value.shape[0], value.shape[1], int(is_complex)))
            fh.write(np.ascontiguousarray(value).astype("<c16" if is_complex else "<f8").tobytes())
    return path


def read_tensors(path: str | Path) -> dict[str, np.ndarray]:
    """
    Raises:
        MissingInputError: If the file does not exist
        FormatError: On a bad magic, unsupported version or truncated payload
    """
    path = require_file(path)
    raw = path.read_bytes()
    try:
        magic, version, count = _HEADER.unpack_from(raw)
        if magic != _MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}", path=str(path))
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported version {version}", path=str(path), version=version)
        offset = _HEADER.size
        tensors: dict[str, np.ndarray] = {}
        for _ in range(count):
            (name_len,) = _NAME_LEN.unpack_from(raw, offset)
            offset += _NAME_LEN.size
            name = raw[offset : offset + name_len].decode("utf-8")
            offset += name_len
            rows, cols, is_complex = _TENSOR.unpack_from(raw, offset)
            offset += _TENSOR.size
            dtype, width = ("<c16", 16) if is_complex else ("<f8", 8)
            nbytes = rows * cols * width
            if offset + nbytes > len(raw):
                raise FormatError(f"{path}: tensor {name} is truncated", path=str(path), tensor=name)
            tensors[name] = np.frombuffer(raw, dtype=dtype, count=rows * cols, offset=offset).reshape(rows, cols).copy()
            offset += nbytes
    except struct.error as e:
        raise FormatError(f"{path}: truncated tensor file", detail=str(e), path=str(path)) from e
    if offset != len(raw):
        raise FormatError(f"{path}: {len(raw) - offset} trailing bytes", path=str(path))
    return tensors


def save_checkpoint(model: Model, path: str | Path, extra: dict[str, Any] | None = None) -> Path:
    """
    保存模型 | Save a model

    Args:
        model: Model to save
        path: JSON file path; tensors go to `<path>.params`
        extra: JSON-able extras (e.g. training summary)
    """
    path = Path(path)
    tensor_path = path.with_name(path.name + ".params")
    write_tensors({p.name: p.value for p in model.parameters()}, tensor_path)
    write_json(
        path,
        {
            "format": CHECKPOINT_FORMAT,
            "spec": model.spec.model_dump(mode="json"),
            "tensors": tensor_path.name,
            "extra": extra or {},
        },
    )
    logger.info(f"checkpoint saved path={path} params={model.parameter_count}")
    return path


def load_checkpoint(path: str | Path) -> Model:
    """
    加载模型 | Load a model

    Raises:
        MissingInputError: If the checkpoint or its tensor file is missing
        FormatError: If the spec is invalid or a tensor is missing or misshapen
    """
    path = Path(path)
    payload = read_json(path)
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise FormatError(f"{path}: unsupported checkpoint format {payload.get('format')}", path=str(path))
    try:
        spec = ModelSpec.model_validate(payload["spec"])
    except (KeyError, ValidationError) as e:
        raise FormatError(f"{path}: invalid model spec", detail=str(e), path=str(path)) from e
    model = build_model(spec)
    tensors = read_tensors(path.with_name(str(payload.get("tensors", path.name + ".params"))))
    for p in model.parameters():
        if p.name not in tensors:
            raise FormatError(f"{path}: tensor {p.name} missing", path=str(path), tensor=p.name)
        value = tensors[p.name]
        if value.shape != p.shape or np.iscomplexobj(value) != np.iscomplexobj(p.value):
            raise FormatError(f"{path}: tensor {p.name} has shape {value.shape}, expected {p.shape}", path=str(path), tensor=p.name)
        p.value = value
        p.zero_grad()
    return model
