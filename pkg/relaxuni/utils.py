# filename: utils.py
# @Time    : 2025/11/12 10:04
# @Software: PyCharm
import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from relaxuni.exceptions import MissingInputError


def _key_to_int(key: str | int) -> int:
    if isinstance(key, int):
        return key
    # 稳定哈希，避免 Python hash 随机化 | Stable hash, independent of PYTHONHASHSEED
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def seed_stream(seed: int, *keys: str | int) -> np.random.Generator:
    """
    从顶层种子派生命名子随机流 | Derive a named random sub-stream from the top-level seed

    同一 (seed, keys) 永远得到同一序列，与线程数和调用顺序无关。
    The same (seed, keys) always yields the same sequence, regardless of thread count or call order.

    Args:
        seed: Top-level seed
        *keys: Stream names or indices, e.g. ("dataset", sample_index)

    Returns:
        np.random.Generator: Independent generator for this stream

    Example:
        >>> a = seed_stream(7, "init", 0).normal()
        >>> b = seed_stream(7, "init", 0).normal()
        >>> a == b
        True
    """
    entropy = [int(seed)] + [_key_to_int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def write_json(path: str | Path, payload: Any) -> Path:
    """
    以稳定格式写 JSON（键排序、缩进 2），保证同样的内容得到相同的字节。
    Write JSON in a stable layout (sorted keys, indent 2) so equal content gives equal bytes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug(f"wrote json path={path}")
    return path


def read_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"File not found: {path}", path=str(path))
    return json.loads(path.read_text(encoding="utf-8"))


def require_file(path: str | Path) -> Path:
    """Return `path` as a Path, raising MissingInputError if it does not exist."""
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"File not found: {path}", path=str(path))
    return path
