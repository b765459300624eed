# filename: loop.py
# @Time    : 2025/11/19 10:30
# @Software: PyCharm
"""
训练循环 | Training loop

每个窗口：先用真值填满输入窗口（teacher forcing），再自回归 bptt_rollout 步，把预测回填进窗口；
各步 MSE 求和，批内取平均，反向传播后做 Adam 更新。
Per window: the input window is filled with ground truth, then the model runs bptt_rollout steps
autoregressively, feeding its predictions back; per-step MSEs are summed, averaged over the batch,
back-propagated, and Adam updates the parameters.
"""

from __future__ import annotations

import csv
import math
import time
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.autodiff.tape import NodeId, Tape
from relaxuni.dynamics.datasets import HeatSample, MeshSample
from relaxuni.exceptions import ContractError, NumericalError, UndefinedQuotientError
from relaxuni.graph.graph import normalized_adjacency
from relaxuni.graph.rayleigh import rayleigh_quotient_dense
from relaxuni.layers.model import Model, build_model
from relaxuni.layers.spec import ModelSpec
from relaxuni.linalg.dense import DenseMatrix
from relaxuni.train.config import LR_GRID, TrainConfig
from relaxuni.train.optim import AdamState, adam_step, clip_grad_norm
from relaxuni.utils import seed_stream

__all__ = [
    "EpochRecord",
    "HISTORY_COLUMNS",
    "SweepResult",
    "TrainHistory",
    "TrainingExample",
    "ensemble",
    "heat_examples",
    "lr_sweep",
    "mesh_examples",
    "mse_loss",
    "split_examples",
    "stack_window",
    "train",
]

HISTORY_COLUMNS = ("epoch", "train_mse", "val_mse", "mean_pred_rq", "mean_target_rq", "seconds")


@dataclass
class TrainingExample:
    """
    Attributes:
        operator: Adjacency the model convolves with
        rq_operator: Normalized adjacency the Rayleigh quotient is measured with
        frames: Ground-truth frames (T, n, d)
        source_id: Graph or mesh label
    """

    operator: DenseMatrix
    rq_operator: DenseMatrix
    frames: npt.NDArray[np.float64]
    source_id: str = ""


def heat_examples(samples: Sequence[HeatSample], model: Model) -> list[TrainingExample]:
    """网格热扩散样本对 → 两帧样本，算子按网格形状复用 | Grid heat pairs as two-frame examples"""
    cache: dict[tuple[int, int], tuple[DenseMatrix, DenseMatrix]] = {}
    out = []
    for s in samples:
        key = (s.rows, s.cols)
        if key not in cache:
            g = s.graph
            cache[key] = (model.operator(g), normalized_adjacency(g))
        op, rq_op = cache[key]
        out.append(TrainingExample(op, rq_op, np.stack([s.input, s.target]), f"grid:{s.rows}x{s.cols}"))
    return out


def mesh_examples(samples: Sequence[MeshSample], model: Model) -> list[TrainingExample]:
    cache: dict[int, DenseMatrix] = {}
    out = []
    for s in samples:
        key = id(s.ops)
        if key not in cache:
            cache[key] = model.operator(s.ops)
        out.append(TrainingExample(cache[key], s.ops.normalized_adjacency, s.trajectory.frames, s.trajectory.source_id))
    return out


def mse_loss(tape: Tape, pred: NodeId, target: NodeId) -> NodeId:
    """
    所有元素的平方差均值 | Mean of squared differences over all entries

    Raises:
        DimensionError: If the shapes differ
    """
    return tape.mse(pred, target)


def stack_window(frames: Sequence[npt.NDArray[np.float64]]) -> npt.NDArray[np.float64]:
    """按通道拼接窗口帧，最早的在前 | Stack window frames as channels, oldest first"""
    return np.concatenate([np.asarray(f) for f in frames], axis=1)


def _concat(tape: Tape, nodes: Sequence[NodeId]) -> NodeId:
    out = nodes[0]
    for node in nodes[1:]:
        out = tape.concat_columns(out, node)
    return out


def _rollout_steps(example: TrainingExample, cfg: TrainConfig) -> int:
    available = len(example.frames) - cfg.input_window
    if available < 1:
        raise ContractError(
            f"example {example.source_id!r} has {len(example.frames)} frames, needs more than input_window={cfg.input_window}",
            source_id=example.source_id,
        )
    return min(cfg.bptt_rollout, available)


def _windows(examples: Sequence[TrainingExample], indices: Sequence[int], cfg: TrainConfig, steps: int | None = None) -> list[tuple[int, int, int]]:
    out = []
    for i in indices:
        k = steps or _rollout_steps(examples[i], cfg)
        last_start = len(examples[i].frames) - cfg.input_window - k
        out.extend((i, start, k) for start in range(last_start + 1))
    return out


def _window_loss(tape: Tape, model: Model, ex: TrainingExample, start: int, steps: int, window: int) -> tuple[NodeId, list[NodeId]]:
    a = tape.constant(ex.operator)
    inputs = [tape.constant(ex.frames[start + j]) for j in range(window)]
    losses, preds = [], []
    for k in range(steps):
        pred = model.forward(tape, _concat(tape, inputs), a)
        losses.append(mse_loss(tape, pred, tape.constant(ex.frames[start + window + k])))
        preds.append(pred)
        inputs = inputs[1:] + [pred]
    total = losses[0]
    for term in losses[1:]:
        total = tape.add(total, term)
    return total, preds


def split_examples(count: int, cfg: TrainConfig) -> tuple[list[int], list[int]]:
    """按种子划分训练/验证集 | Seeded train/validation split"""
    perm = seed_stream(cfg.seed, "split").permutation(count)
    n_val = min(int(round(count * cfg.val_fraction)), count - 1)
    return sorted(perm[n_val:].tolist()), sorted(perm[:n_val].tolist())


@dataclass
class EpochRecord:
    epoch: int
    train_mse: float
    val_mse: float
    mean_pred_rq: float
    mean_target_rq: float
    seconds: float


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)
    diverged: bool = False
    diverged_at: int | None = None
    reason: str | None = None

    @property
    def final_val_mse(self) -> float:
        return self.records[-1].val_mse if self.records else math.nan

    @property
    def final_train_mse(self) -> float:
        return self.records[-1].train_mse if self.records else math.nan

    def to_rows(self) -> list[dict[str, float]]:
        return [asdict(r) for r in self.records]

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(HISTORY_COLUMNS), lineterminator="\n")
            writer.writeheader()
            for row in self.to_rows():
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return path


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else math.nan


def _evaluate(model: Model, examples: Sequence[TrainingExample], windows: Sequence[tuple[int, int, int]], cfg: TrainConfig) -> tuple[float, float, float]:
    """一步预测的 MSE 与平均 Rayleigh 商 | One-step MSE and mean Rayleigh quotients"""
    if not windows:
        return math.nan, math.nan, math.nan
    mses, pred_rq, target_rq = [], [], []
    skipped = 0
    for i, start, _ in windows:
        ex = examples[i]
        x = stack_window(ex.frames[start : start + cfg.input_window])
        target = ex.frames[start + cfg.input_window]
        pred = model.predict(x, ex.operator)
        mses.append(float(np.mean((pred - target) ** 2)))
        try:
            p_rq = rayleigh_quotient_dense(ex.rq_operator, pred)
            t_rq = rayleigh_quotient_dense(ex.rq_operator, target)
        except UndefinedQuotientError:
            skipped += 1
            continue
        pred_rq.append(p_rq)
        target_rq.append(t_rq)
    if skipped:
        logger.warning(f"rayleigh quotient skipped for zero frames count={skipped}")
    return float(np.mean(mses)), _mean(pred_rq), _mean(target_rq)


def train(model: Model, examples: Sequence[TrainingExample], cfg: TrainConfig) -> TrainHistory:
    """
    训练模型（就地更新参数）| Train a model, updating its parameters in place

    Args:
        model: Model whose input_window matches cfg.input_window
        examples: Ground-truth sequences
        cfg: Training configuration

    Returns:
        TrainHistory: Per-epoch train/val MSE, mean predicted and target Rayleigh quotients, wall time.
        A NaN loss or non-finite gradient marks the history as diverged and stops the run.

    Raises:
        ContractError: If the model and config disagree on the input window, or an example is too short
    """
    if model.spec.input_window != cfg.input_window:
        raise ContractError(f"model input_window={model.spec.input_window} but config input_window={cfg.input_window}")
    if not examples:
        raise ContractError("training needs at least one example")
    train_idx, val_idx = split_examples(len(examples), cfg)
    train_windows = _windows(examples, train_idx, cfg)
    val_windows = _windows(examples, val_idx, cfg, steps=1)
    params = model.parameters()
    state = AdamState()
    history = TrainHistory()
    logger.info(f"training start model={model.spec.name} train_windows={len(train_windows)} val_windows={len(val_windows)} lr={cfg.lr}")

    for epoch in range(1, cfg.epochs + 1):
        started = time.perf_counter()
        order = seed_stream(cfg.seed, "shuffle", epoch).permutation(len(train_windows))
        per_step_losses: list[float] = []
        for b in range(0, len(order), cfg.batch_size):
            batch = [train_windows[j] for j in order[b : b + cfg.batch_size]]
            for p in params:
                p.zero_grad()
            batch_loss = 0.0
            for i, start, steps in batch:
                tape = Tape()
                loss, _ = _window_loss(tape, model, examples[i], start, steps, cfg.input_window)
                value = float(np.real(tape.value(loss)[0, 0]))
                batch_loss += value / len(batch)
                per_step_losses.append(value / steps)
                if not math.isfinite(value):
                    break
                tape.backward(tape.scale(loss, 1.0 / len(batch)))
            if not math.isfinite(batch_loss):
                history.diverged, history.diverged_at, history.reason = True, epoch, "non-finite loss"
                break
            if cfg.grad_clip is not None:
                clip_grad_norm(params, cfg.grad_clip)
            try:
                adam_step(params, None, state, cfg.lr, cfg.betas, cfg.eps)
            except NumericalError as e:
                history.diverged, history.diverged_at, history.reason = True, epoch, e.message
                break
        if history.diverged:
            logger.warning(f"training diverged epoch={epoch} reason={history.reason}")
            break
        val_mse, pred_rq, target_rq = _evaluate(model, examples, val_windows or _windows(examples, train_idx, cfg, steps=1), cfg)
        if not val_windows:
            val_mse = math.nan
        record = EpochRecord(
            epoch=epoch,
            train_mse=float(np.mean(per_step_losses)) if per_step_losses else math.nan,
            val_mse=val_mse,
            mean_pred_rq=pred_rq,
            mean_target_rq=target_rq,
            seconds=time.perf_counter() - started,
        )
        history.records.append(record)
        logger.info(
            f"epoch done epoch={epoch} train_mse={record.train_mse:.4e} val_mse={record.val_mse:.4e} "
            f"mean_pred_rq={record.mean_pred_rq:.4f} mean_target_rq={record.mean_target_rq:.4f}"
        )
    return history


# —— sweeps —— #


@dataclass
class SweepResult:
    best_lr: float
    histories: dict[float, TrainHistory]
    models: dict[float, Model]


def lr_sweep(spec: ModelSpec, examples: Sequence[TrainingExample], cfg: TrainConfig, grid: Sequence[float] = LR_GRID) -> SweepResult:
    """
    学习率网格搜索：每个学习率从同一初始化重新训练，按最终验证 MSE 选最优。
    Learning-rate grid search: each rate retrains from the same initialization; the lowest final
    validation MSE (train MSE when there is no validation split) wins.
    """
    histories: dict[float, TrainHistory] = {}
    models: dict[float, Model] = {}
    for lr in grid:
        model = build_model(spec)
        histories[lr] = train(model, examples, cfg.model_copy(update={"lr": lr}))
        models[lr] = model

    def score(lr: float) -> float:
        h = histories[lr]
        value = h.final_val_mse if math.isfinite(h.final_val_mse) else h.final_train_mse
        return value if not h.diverged and math.isfinite(value) else math.inf

    best = min(grid, key=score)
    scores = {lr: score(lr) for lr in grid}
    logger.info(f"lr sweep done best_lr={best} scores={scores}")
    return SweepResult(best_lr=best, histories=histories, models=models)


def ensemble(spec: ModelSpec, examples: Sequence[TrainingExample], cfg: TrainConfig, seeds: Sequence[int]) -> list[tuple[int, Model, TrainHistory]]:
    """同一配置、不同种子的多次独立训练 | Independent runs of one configuration over several seeds"""
    runs = []
    for seed in seeds:
        model = build_model(spec.model_copy(update={"seed": seed}))
        history = train(model, examples, cfg.model_copy(update={"seed": seed}))
        runs.append((seed, model, history))
    return runs
