# filename: trajectory.py
# @Time    : 2025/11/17 09:30
# @Software: PyCharm
"""
时间序列快照与二进制文件格式 | Time-indexed snapshots and their binary file format

文件格式（小端）| File layout (little-endian):
    magic "TRAJ" | u32 version=1 | u64 n | u64 d | u64 n_frames | f64 times[n_frames] | f64 frames (row-major, frame by frame)
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.exceptions import ArgumentError, DimensionError, FormatError
from relaxuni.utils import read_json, require_file, write_json

__all__ = ["MAGIC", "VERSION", "Trajectory", "read_trajectory", "write_trajectory"]

MAGIC = b"TRAJ"
VERSION = 1
_HEADER = struct.Struct("<4sIQQQ")


@dataclass
class Trajectory:
    """
    Attributes:
        times: Strictly increasing times, times[0] >= 0
        frames: Array of shape (n_frames, n, d)
        source_id: Graph or mesh the trajectory lives on
        metadata: JSON-able extras (e.g. truncation flag of a rollout)
        velocities: Optional per-frame velocities (wave equation), not serialized
    """

    times: npt.NDArray[np.float64]
    frames: npt.NDArray[np.float64]
    source_id: str = ""
    metadata: dict[str, Any] = field(default_factory=dict)
    velocities: npt.NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64).reshape(-1)
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim == 2:
            frames = frames[:, :, None]
        if frames.ndim != 3:
            raise DimensionError(f"frames must be (n_frames, n, d), got {frames.shape}", shape=frames.shape)
        if frames.shape[0] != len(self.times):
            raise DimensionError(f"{frames.shape[0]} frames but {len(self.times)} times", frames=frames.shape[0], times=len(self.times))
        if len(self.times) and self.times[0] < 0:
            raise ArgumentError(f"times[0] must be >= 0, got {self.times[0]}")
        if np.any(np.diff(self.times) <= 0):
            raise ArgumentError("times must be strictly increasing")
        self.frames = frames

    def __len__(self) -> int:
        return int(self.frames.shape[0])

    @property
    def n(self) -> int:
        return int(self.frames.shape[1])

    @property
    def d(self) -> int:
        return int(self.frames.shape[2])

    def frame(self, k: int) -> npt.NDArray[np.float64]:
        return self.frames[k]

    def at_time(self, t: float, tol: float = 1e-9) -> npt.NDArray[np.float64]:
        """按时间取帧 | Frame recorded at time `t`"""
        hit = np.nonzero(np.abs(self.times - t) <= tol)[0]
        if not len(hit):
            raise ArgumentError(f"no frame at time {t}", time=t)
        return self.frames[hit[0]]

    def save(self, path: str | Path) -> Path:
        return write_trajectory(self, path)


def write_trajectory(traj: Trajectory, path: str | Path) -> Path:
    """
    写二进制轨迹；非空 metadata 另存为同名 `.json` 旁注文件。
    Write the binary trajectory; non-empty metadata goes to a sibling `.json` sidecar.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(MAGIC, VERSION, traj.n, traj.d, len(traj))
    with path.open("wb") as fh:
        fh.write(header)
        fh.write(traj.times.astype("<f8").tobytes())
        fh.write(np.ascontiguousarray(traj.frames).astype("<f8").tobytes())
    if traj.metadata or traj.source_id:
        write_json(path.with_suffix(path.suffix + ".json"), {"source_id": traj.source_id, "metadata": traj.metadata})
    logger.debug(f"wrote trajectory path={path} frames={len(traj)} n={traj.n} d={traj.d}")
    return path


def read_trajectory(path: str | Path) -> Trajectory:
    """
    Raises:
        MissingInputError: If the file does not exist
        FormatError: On a bad magic, unsupported version or truncated payload
    """
    path = require_file(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header", path=str(path))
    magic, version, n, d, n_frames = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}", path=str(path))
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}", path=str(path), version=version)
    expected = _HEADER.size + 8 * (n_frames + n_frames * n * d)
    if len(raw) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, got {len(raw)}", path=str(path))
    offset = _HEADER.size
    times = np.frombuffer(raw, dtype="<f8", count=n_frames, offset=offset).astype(np.float64)
    offset += 8 * n_frames
    frames = np.frombuffer(raw, dtype="<f8", count=n_frames * n * d, offset=offset).astype(np.float64).reshape(n_frames, n, d)
    sidecar = path.with_suffix(path.suffix + ".json")
    source_id, metadata = "", {}
    if sidecar.exists():
        extra = read_json(sidecar)
        source_id, metadata = extra.get("source_id", ""), extra.get("metadata", {})
    return Trajectory(times=times, frames=frames, source_id=source_id, metadata=metadata)
