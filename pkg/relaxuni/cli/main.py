# filename: main.py
# @Time    : 2025/11/22 11:30
# @Software: PyCharm
"""
relaxuni 命令行入口 | relaxuni command-line entry

用法 | Usage:
    relaxuni [--threads N] [--log-level LEVEL] gen-data --config C --out DIR
    relaxuni train --config C --data DIR --out DIR
    relaxuni rollout --checkpoint M --init T --steps K --out DIR
    relaxuni eval --pred P --truth T --metrics nrmse,smape,re,mre --out DIR
    relaxuni sensitivity --config C --out DIR
    relaxuni bound --config C --out DIR
    relaxuni mesh-prep --in MESH --out DIR

失败时向 stdout 打印错误 JSON，并以异常的 exit_code 退出。
On failure an error JSON is printed to stdout and the process exits with the exception's exit_code.
"""

import json
import platform
import sys
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
import scipy
from loguru import logger
from pydantic import ValidationError
from simple_parsing import ArgumentParser

from relaxuni import __version__
from relaxuni.cli import commands
from relaxuni.cli.args import (
    BoundArguments,
    EvalArguments,
    GenDataArguments,
    GlobalArguments,
    MeshPrepArguments,
    RolloutArguments,
    SensitivityArguments,
    TrainArguments,
)
from relaxuni.exceptions import ConfigError, RelaxUniError

__all__ = ["build_parser", "main", "run"]

Runner = Callable[[Any, GlobalArguments], dict[str, Any]]

COMMANDS: dict[str, tuple[type, Runner, str]] = {
    "gen-data": (GenDataArguments, commands.run_gen_data, "生成训练轨迹与清单 | generate trajectories and a manifest"),
    "train": (TrainArguments, commands.run_train, "训练模型 | train a model"),
    "rollout": (RolloutArguments, commands.run_rollout, "自回归推理 | autoregressive rollout"),
    "eval": (EvalArguments, commands.run_eval, "计算评估指标 | compute metrics"),
    "sensitivity": (SensitivityArguments, commands.run_sensitivity, "泰勒截断敏感性 | Taylor truncation sensitivity"),
    "bound": (BoundArguments, commands.run_bound, "酉逼近误差下界 | unitary approximation-error lower bound"),
    "mesh-prep": (MeshPrepArguments, commands.run_mesh_prep, "流形检查与 Delaunay 重连 | manifold check and Delaunay rewiring"),
}


def version_string() -> str:
    return f"relaxuni {__version__} (python {platform.python_version()}, numpy {np.__version__}, scipy {scipy.__version__})"


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="relaxuni", description="Smoothness-controlled dynamics on graphs and meshes")
    parser.add_argument("--version", action="version", version=version_string())
    parser.add_arguments(GlobalArguments, dest="common")
    subparsers = parser.add_subparsers(title="command", dest="command", required=True)
    for name, (arg_cls, _, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_arguments(arg_cls, dest="args")
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


def run(argv: Sequence[str] | None = None) -> int:
    """
    解析参数并执行子命令，返回退出码 | Parse arguments, run the sub-command and return the exit code

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
    """
    ns = build_parser().parse_args(list(argv) if argv is not None else None)
    common: GlobalArguments = ns.common
    configure_logging(common.log_level)
    _, runner, _ = COMMANDS[ns.command]
    logger.info(f"命令开始 | command started command={ns.command}")
    try:
        result = runner(ns.args, common)
    except ValidationError as e:
        err: RelaxUniError = ConfigError(f"invalid configuration for {ns.command}", detail=str(e))
    except RelaxUniError as e:
        err = e
    except Exception as e:
        logger.exception(f"未预期的错误 | unexpected error command={ns.command}")
        err = RelaxUniError(str(e) or type(e).__name__, detail=type(e).__name__)
    else:
        logger.info(f"命令完成 | command finished command={ns.command}")
        print(json.dumps(result, sort_keys=True, default=str))
        return 0
    logger.error(f"命令失败 | command failed command={ns.command} error={type(err).__name__} message={err.message}")
    print(json.dumps(err.to_dict(), sort_keys=True))
    return err.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
