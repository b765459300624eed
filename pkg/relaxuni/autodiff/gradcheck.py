# filename: gradcheck.py
# @Time    : 2025/11/13 11:30
# @Software: PyCharm
from collections.abc import Callable, Sequence

import numpy as np
from loguru import logger

from relaxuni.autodiff.tape import NodeId, Param, Tape
from relaxuni.exceptions import ArgumentError, NumericalError

__all__ = ["grad_check", "DEFAULT_EPSILON", "DEFAULT_TOLERANCE"]

DEFAULT_EPSILON = 1e-5
DEFAULT_TOLERANCE = 1e-4
_FLOOR = 1e-8


def _loss_value(forward: Callable[[Tape], NodeId]) -> float:
    tape = Tape()
    loss = forward(tape)
    return float(np.real(tape.value(loss)[0, 0]))


def _rel_err(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), _FLOOR)


def grad_check(
    forward: Callable[[Tape], NodeId],
    params: Sequence[Param],
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """
    中心差分校验解析梯度 | Check analytic gradients against central differences

    `forward` 在给定磁带上构建计算并返回 1×1 损失节点；每次求值使用新磁带。复数参数的实部与虚部分别扰动。
    `forward` builds the computation on the tape it is given and returns the 1x1 loss node; every
    evaluation uses a fresh tape. Real and imaginary parts of complex parameters are perturbed separately.

    Args:
        forward: Loss builder
        params: Parameters to check
        epsilon: Finite-difference step

    Returns:
        float: Maximum relative error |g_a − g_n| / max(|g_a|, |g_n|, 1e-8) over all entries

    Raises:
        NumericalError: If a perturbed forward pass is non-finite; context names the parameter and entry
    """
    if epsilon <= 0:
        raise ArgumentError(f"epsilon must be > 0, got {epsilon}", epsilon=epsilon)
    for p in params:
        p.zero_grad()
    tape = Tape()
    tape.backward(forward(tape))
    analytic = {id(p): p.grad.copy() for p in params}

    worst = 0.0
    for p in params:
        parts: list[complex] = [1.0, 1j] if np.iscomplexobj(p.value) else [1.0]
        for index in np.ndindex(*p.shape):
            original = p.value[index]
            for unit in parts:
                p.value[index] = original + epsilon * unit
                plus = _loss_value(forward)
                p.value[index] = original - epsilon * unit
                minus = _loss_value(forward)
                p.value[index] = original
                if not (np.isfinite(plus) and np.isfinite(minus)):
                    raise NumericalError(
                        "non-finite loss during gradient check",
                        param=p.name,
                        index=list(index),
                        component="imag" if unit == 1j else "real",
                    )
                numeric = (plus - minus) / (2.0 * epsilon)
                g = analytic[id(p)][index]
                exact = float(np.imag(g)) if unit == 1j else float(np.real(g))
                err = _rel_err(exact, numeric)
                if err > worst:
                    worst = err
                    logger.trace(f"grad_check param={p.name} index={index} analytic={exact:.3e} numeric={numeric:.3e}")
    logger.debug(f"grad_check params={len(params)} max_rel_err={worst:.3e}")
    return worst
