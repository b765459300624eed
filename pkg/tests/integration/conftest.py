# filename: conftest.py
# @Time    : 2025/11/25 13:00
# @Software: PyCharm
"""
命令行集成测试的公共夹具 | Shared fixtures for the command-line integration tests
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from relaxuni.cli.main import run

CliRunner = Callable[..., tuple[int, dict[str, Any]]]


@pytest.fixture
def run_cli(capsys: pytest.CaptureFixture[str]) -> CliRunner:
    """运行一个子命令，返回 (退出码, 输出 JSON) | Run a sub-command and return (exit code, printed JSON)"""

    def invoke(*argv: str) -> tuple[int, dict[str, Any]]:
        code = run(["--log-level", "WARNING", *argv])
        lines = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
        return code, json.loads(lines[-1])

    return invoke


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str, dict[str, Any]], Path]:
    def write(name: str, payload: dict[str, Any]) -> Path:
        path = tmp_path / "configs" / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write
