# filename: rollout.py
# @Time    : 2025/11/19 14:20
# @Software: PyCharm
"""
自回归推理 | Autoregressive inference
"""

import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import ContractError
from relaxuni.layers.model import Model
from relaxuni.train.loop import stack_window

__all__ = ["rollout", "rollout_many"]


def _as_window(model: Model, initial_window: npt.ArrayLike) -> list[npt.NDArray[np.float64]]:
    arr = np.asarray(initial_window, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[0] != model.spec.input_window:
        raise ContractError(
            f"initial window must hold {model.spec.input_window} frames of shape (n, d), got {arr.shape}",
            expected=model.spec.input_window,
        )
    return [arr[k] for k in range(arr.shape[0])]


def rollout(
    model: Model,
    operator: npt.ArrayLike,
    initial_window: npt.ArrayLike,
    steps: int,
    dt: float = 1.0,
    t0: float = 0.0,
    source_id: str = "",
) -> Trajectory:
    """
    反复应用模型并滑动输入窗口 | Apply the model repeatedly, shifting the input window

    预测出现非有限值时截断，并在 metadata 中标记 truncated / truncated_at。
    A non-finite prediction truncates the rollout and is flagged in metadata (truncated, truncated_at).

    Args:
        model: Trained model
        operator: Adjacency matching the model's operator source
        initial_window: (input_window, n, d) frames, oldest first; (input_window, n) for one channel
        steps: Number of frames to predict
        dt: Time between frames
        t0: Time of the first predicted frame minus dt
        source_id: Label stored in the trajectory

    Returns:
        Trajectory: Predicted frames at t0 + dt, ..., t0 + steps·dt

    Raises:
        ContractError: If the initial window length differs from the model's input_window
    """
    if steps < 1:
        raise ContractError(f"steps must be >= 1, got {steps}", steps=steps)
    window = _as_window(model, initial_window)
    op = np.asarray(operator)
    frames: list[npt.NDArray[np.float64]] = []
    truncated_at: int | None = None
    for k in range(steps):
        pred = model.predict(stack_window(window), op)
        if not np.all(np.isfinite(pred)):
            truncated_at = k
            logger.warning(f"rollout truncated model={model.spec.name} step={k}")
            break
        frames.append(pred)
        window = window[1:] + [pred]
    n, d = window[-1].shape
    stacked = np.stack(frames) if frames else np.zeros((0, n, d))
    return Trajectory(
        times=t0 + dt * np.arange(1, len(frames) + 1),
        frames=stacked,
        source_id=source_id,
        metadata={"model": model.spec.name, "steps": steps, "truncated": truncated_at is not None, "truncated_at": truncated_at},
    )


def rollout_many(
    model: Model,
    jobs: Sequence[tuple[npt.ArrayLike, npt.ArrayLike]],
    steps: int,
    threads: int | None = None,
    dt: float = 1.0,
) -> list[Trajectory]:
    """
    在多个线程上并行多条 rollout，参数只读共享 | Parallel rollouts sharing read-only parameters

    Args:
        jobs: (operator, initial_window) pairs
    """
    workers = max(1, threads or os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: rollout(model, job[0], job[1], steps, dt=dt), jobs))
