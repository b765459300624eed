# filename: args.py
# @Time    : 2025/11/22 09:40
# @Software: PyCharm
"""
命令行参数组 | Command-line argument groups

每个子命令一个 simple_parsing 数据类；运行结束后原样写入 resolved_args.json。
One simple_parsing dataclass per sub-command, written verbatim to resolved_args.json after the run.
"""

from dataclasses import dataclass

from simple_parsing import field
from simple_parsing.helpers import FrozenSerializable

__all__ = [
    "BoundArguments",
    "EvalArguments",
    "GenDataArguments",
    "GlobalArguments",
    "MeshPrepArguments",
    "RolloutArguments",
    "SensitivityArguments",
    "TrainArguments",
]

DEFAULT_EVAL_METRICS = "nrmse,smape,re,mre"


@dataclass(frozen=True)
class GlobalArguments(FrozenSerializable):
    """所有子命令共享的参数 | Options shared by every sub-command"""

    # 工作线程数，默认为 CPU 核数 | worker threads, default: machine cores
    threads: int | None = None
    # loguru 日志级别 | loguru log level
    log_level: str = field(default="INFO", alias=["--log-level"])


@dataclass(frozen=True)
class GenDataArguments(FrozenSerializable):
    config: str
    out: str


@dataclass(frozen=True)
class TrainArguments(FrozenSerializable):
    config: str
    # gen-data 输出目录 | a gen-data output directory
    data: str
    out: str


@dataclass(frozen=True)
class RolloutArguments(FrozenSerializable):
    checkpoint: str
    # 初始轨迹文件，取其前 input_window 帧 | trajectory whose first input_window frames seed the rollout
    init: str
    steps: int
    out: str


@dataclass(frozen=True)
class EvalArguments(FrozenSerializable):
    # 预测轨迹文件或目录 | predicted trajectory file or directory
    pred: str
    # 真值轨迹文件或目录 | ground-truth trajectory file or directory
    truth: str
    out: str
    # 逗号分隔：nrmse, smape, re, mre, err_smooth | comma separated
    metrics: str = DEFAULT_EVAL_METRICS


@dataclass(frozen=True)
class SensitivityArguments(FrozenSerializable):
    config: str
    out: str


@dataclass(frozen=True)
class BoundArguments(FrozenSerializable):
    config: str
    out: str


@dataclass(frozen=True)
class MeshPrepArguments(FrozenSerializable):
    # 输入 OFF / OBJ 网格 | input OFF / OBJ mesh
    input: str = field(alias=["--in"])
    out: str
