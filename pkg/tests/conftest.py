# filename: conftest.py
# @Time    : 2025/11/23 09:10
# @Software: PyCharm
"""
全局 pytest 配置 | Global pytest configuration

测试期间把 loguru 输出压到 WARNING，避免淹没 pytest 的输出。
Loguru output is lowered to WARNING during tests so it does not flood pytest's output.
"""

import contextlib
import sys
from collections.abc import Generator

import numpy as np
import pytest
from loguru import logger


@pytest.fixture(scope="session", autouse=True)
def quiet_logging() -> Generator[None, None, None]:
    logger.remove()
    handler = logger.add(sys.stderr, level="WARNING")
    yield
    # CLI 测试会调用 logger.remove()，句柄可能已不存在 | CLI tests may already have removed it
    with contextlib.suppress(ValueError):
        logger.remove(handler)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20251123)


@pytest.fixture
def random_complex(rng: np.random.Generator):
    def make(rows: int, cols: int) -> np.ndarray:
        return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))

    return make
