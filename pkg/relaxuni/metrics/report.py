# filename: report.py
# @Time    : 2025/11/20 14:00
# @Software: PyCharm
"""
指标输出：CSV 行与 JSON 汇总 | Metric output: CSV rows and a JSON summary

数值不做缩放；滚动步数等缩放因子仅作为元数据记录。
Values are written unscaled; scale factors such as the rollout length are recorded as metadata only.
"""

import csv
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from relaxuni.utils import write_json

__all__ = ["METRIC_COLUMNS", "ROLLOUT_SCALE", "MetricRow", "summarize", "write_metric_rows", "write_metric_summary"]

METRIC_COLUMNS = ("run_id", "mesh_id", "metric", "value")
ROLLOUT_SCALE = 196


@dataclass(frozen=True)
class MetricRow:
    run_id: str
    mesh_id: str
    metric: str
    value: float


def write_metric_rows(rows: Sequence[MetricRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(METRIC_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({**asdict(row), "value": repr(float(row.value))})
    return path


def summarize(rows: Sequence[MetricRow]) -> dict[str, dict[str, float]]:
    """每个指标的 mean / std / median / count（忽略 NaN）| Per-metric statistics, NaN ignored"""
    grouped: dict[str, list[float]] = {}
    for row in rows:
        grouped.setdefault(row.metric, []).append(float(row.value))
    out: dict[str, dict[str, float]] = {}
    for metric, values in sorted(grouped.items()):
        finite = [v for v in values if math.isfinite(v)]
        out[metric] = {
            "count": len(finite),
            "mean": float(np.mean(finite)) if finite else math.nan,
            "std": float(np.std(finite)) if finite else math.nan,
            "median": float(np.median(finite)) if finite else math.nan,
        }
    return out


def write_metric_summary(rows: Sequence[MetricRow], path: str | Path, metadata: dict[str, Any] | None = None) -> Path:
    payload = {
        "metrics": summarize(rows),
        "metadata": {"rollout_scale": ROLLOUT_SCALE, **(metadata or {})},
    }
    # NaN 不是合法 JSON | NaN is not valid JSON
    for stats in payload["metrics"].values():
        for key, value in stats.items():
            if isinstance(value, float) and not math.isfinite(value):
                stats[key] = None
    return write_json(path, payload)
