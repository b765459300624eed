"""
损失、优化器、训练循环与自回归推理 | Loss, optimizer, training loop and autoregressive inference
"""

from relaxuni.train.config import LR_GRID, TrainConfig
from relaxuni.train.loop import (
    HISTORY_COLUMNS,
    EpochRecord,
    SweepResult,
    TrainHistory,
    TrainingExample,
    ensemble,
    heat_examples,
    lr_sweep,
    mesh_examples,
    mse_loss,
    split_examples,
    stack_window,
    train,
)
from relaxuni.train.optim import AdamState, adam_step, clip_grad_norm, global_grad_norm
from relaxuni.train.rollout import rollout, rollout_many
from relaxuni.train.sensitivity import (
    SENSITIVITY_INIT_SCALE,
    SENSITIVITY_KINDS,
    SENSITIVITY_T_MAX,
    SensitivityPoint,
    SensitivitySummary,
    rq_sensitivity,
    summarize_sensitivity,
    write_sensitivity_csv,
)

__all__ = [
    "AdamState",
    "EpochRecord",
    "HISTORY_COLUMNS",
    "LR_GRID",
    "SENSITIVITY_INIT_SCALE",
    "SENSITIVITY_KINDS",
    "SENSITIVITY_T_MAX",
    "SensitivityPoint",
    "SensitivitySummary",
    "SweepResult",
    "TrainConfig",
    "TrainHistory",
    "TrainingExample",
    "adam_step",
    "clip_grad_norm",
    "ensemble",
    "global_grad_norm",
    "heat_examples",
    "lr_sweep",
    "mesh_examples",
    "mse_loss",
    "rollout",
    "rollout_many",
    "rq_sensitivity",
    "split_examples",
    "stack_window",
    "summarize_sensitivity",
    "train",
    "write_sensitivity_csv",
]
