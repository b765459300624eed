# filename: optim.py
# @Time    : 2025/11/19 09:40
# @Software: PyCharm
"""
Adam 与梯度裁剪 | Adam and gradient clipping

复数参数的梯度约定为 G = ∂L/∂Re + i·∂L/∂Im，因此 −G 为下降方向，二阶矩用 |G|²。
Complex gradients follow G = ∂L/∂Re + i·∂L/∂Im, so −G is a descent direction and the second moment uses |G|².
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from relaxuni.autodiff.tape import Param
from relaxuni.exceptions import ArgumentError, NumericalError
from relaxuni.linalg.dense import DenseMatrix

__all__ = ["AdamState", "adam_step", "clip_grad_norm", "global_grad_norm"]


@dataclass
class AdamState:
    """
    Attributes:
        step: Number of updates applied so far
        m: First moments by parameter name
        v: Second moments by parameter name
    """

    step: int = 0
    m: dict[str, DenseMatrix] = field(default_factory=dict)
    v: dict[str, DenseMatrix] = field(default_factory=dict)


def adam_step(
    params: Sequence[Param],
    grads: Sequence[DenseMatrix] | None,
    state: AdamState,
    lr: float,
    betas: tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> AdamState:
    """
    一次带偏差修正的 Adam 更新（就地修改 Param.value）| One bias-corrected Adam update, in place

    Args:
        params: Parameters to update
        grads: Gradients aligned with params; None uses each Param.grad
        state: Moments from previous steps (empty on the first step)
        lr: Step size
        betas: Moment decay rates
        eps: Denominator floor

    Returns:
        AdamState: The updated state (same object)

    Raises:
        NumericalError: If a gradient holds NaN or inf; context names the parameter
    """
    if lr < 0:
        raise ArgumentError(f"lr must be >= 0, got {lr}", lr=lr)
    grad_list = [p.grad for p in params] if grads is None else list(grads)
    if len(grad_list) != len(params):
        raise ArgumentError(f"{len(params)} params but {len(grad_list)} gradients")
    for p, g in zip(params, grad_list):
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"non-finite gradient for parameter {p.name}", param=p.name)

    b1, b2 = betas
    state.step += 1
    c1 = 1.0 - b1**state.step
    c2 = 1.0 - b2**state.step
    for p, g in zip(params, grad_list):
        m = state.m.get(p.name)
        v = state.v.get(p.name)
        m = (1.0 - b1) * g if m is None else b1 * m + (1.0 - b1) * g
        sq = np.abs(g) ** 2
        v = (1.0 - b2) * sq if v is None else b2 * v + (1.0 - b2) * sq
        state.m[p.name], state.v[p.name] = m, v
        update = lr * (m / c1) / (np.sqrt(v / c2) + eps)
        p.value = p.value - (update if np.iscomplexobj(p.value) else np.real(update))
    return state


def global_grad_norm(params: Sequence[Param]) -> float:
    return float(np.sqrt(sum(float(np.sum(np.abs(p.grad) ** 2)) for p in params)))


def clip_grad_norm(params: Sequence[Param], max_norm: float) -> float:
    """
    按全局范数裁剪梯度 | Clip gradients by their global norm

    Returns:
        float: The norm before clipping
    """
    norm = global_grad_norm(params)
    if norm > max_norm > 0:
        factor = max_norm / norm
        for p in params:
            p.grad = p.grad * factor
    return norm
