# filename: ops.py
# @Time    : 2025/11/13 09:12
# @Software: PyCharm
"""
算子注册表 | Operator registry

每个算子由前向函数与向量-雅可比积（VJP）组成。复数梯度约定：对实值损失 L，
参数 z 的梯度为 ∂L/∂Re z + i·∂L/∂Im z，因此所有 VJP 使用共轭转置。
Each op is a forward function plus its vector-Jacobian product. For a real loss L the gradient of a
complex entry z is ∂L/∂Re z + i·∂L/∂Im z, so every VJP uses conjugate transposes.

No broadcasting anywhere: shapes are checked explicitly and mismatches raise DimensionError.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from relaxuni.exceptions import ArgumentError, DimensionError, LayerConfigurationError
from relaxuni.linalg.dense import DenseMatrix, conj_transpose

__all__ = ["OPS", "OpDef", "GROUP_SIZE"]

# GroupSort 组大小固定为 2（MaxMin）| fixed group size 2 (MaxMin)
GROUP_SIZE = 2

Forward = Callable[[Sequence[DenseMatrix], dict[str, Any]], tuple[DenseMatrix, Any]]
Backward = Callable[[DenseMatrix, Sequence[DenseMatrix], DenseMatrix, Any, dict[str, Any]], list[DenseMatrix | None]]


@dataclass(frozen=True, slots=True)
class OpDef:
    kind: str
    arity: int
    forward: Forward
    backward: Backward


OPS: dict[str, OpDef] = {}


def _defop(kind: str, arity: int, forward: Forward, backward: Backward) -> None:
    OPS[kind] = OpDef(kind=kind, arity=arity, forward=forward, backward=backward)


def _same_shape(kind: str, a: DenseMatrix, b: DenseMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{kind}: shapes {a.shape} and {b.shape} differ", shapes=[a.shape, b.shape])


def _require_real(kind: str, x: DenseMatrix) -> None:
    if np.iscomplexobj(x):
        raise LayerConfigurationError(f"{kind} is defined for real inputs only")


def _require_scalar(kind: str, s: DenseMatrix) -> None:
    if s.shape != (1, 1):
        raise DimensionError(f"{kind}: scalar operand must be 1x1, got {s.shape}", shape=s.shape)


# —— matmul / add / subtract —— #


def _matmul_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    a, b = xs
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: {a.shape} @ {b.shape}", shapes=[a.shape, b.shape])
    return a @ b, None


def _matmul_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, cache: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    a, b = xs
    return [g @ conj_transpose(b), conj_transpose(a) @ g]


def _add_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    _same_shape("add", xs[0], xs[1])
    return xs[0] + xs[1], None


def _sub_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    _same_shape("subtract", xs[0], xs[1])
    return xs[0] - xs[1], None


_defop("matmul", 2, _matmul_fwd, _matmul_bwd)
_defop("add", 2, _add_fwd, lambda g, xs, y, c, a: [g, g])
_defop("subtract", 2, _sub_fwd, lambda g, xs, y, c, a: [g, -g])


# —— scalar_multiply —— #
# 两种形态：(s, X) 其中 s 为 1×1 节点；或 (X,) 配合常数 attrs["scalar"]。
# Two forms: (s, X) with a 1x1 node s, or (X,) with a constant attrs["scalar"].


def _scale_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    if len(xs) == 1:
        return attrs["scalar"] * xs[0], None
    s, x = xs
    _require_scalar("scalar_multiply", s)
    return s[0, 0] * x, None


def _scale_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, cache: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    if len(xs) == 1:
        return [np.conj(attrs["scalar"]) * g]
    s, x = xs
    gs = np.array([[np.sum(np.conj(x) * g)]])
    return [gs, np.conj(s[0, 0]) * g]


OPS["scalar_multiply"] = OpDef("scalar_multiply", -1, _scale_fwd, _scale_bwd)


# —— hadamard / transpose_conj —— #


def _hadamard_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    _same_shape("hadamard", xs[0], xs[1])
    return xs[0] * xs[1], None


_defop("hadamard", 2, _hadamard_fwd, lambda g, xs, y, c, a: [np.conj(xs[1]) * g, np.conj(xs[0]) * g])
_defop(
    "transpose_conj",
    1,
    lambda xs, attrs: (conj_transpose(xs[0]).copy(), None),
    lambda g, xs, y, c, a: [conj_transpose(g).copy()],
)


# —— zero_pad / slice_columns / concat_columns —— #


def _zero_pad_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    x = xs[0]
    d_out = int(attrs["d_out"])
    if d_out < x.shape[1]:
        raise ArgumentError(f"zero_pad: d_out={d_out} < d_in={x.shape[1]}", d_out=d_out, d_in=x.shape[1])
    out = np.zeros((x.shape[0], d_out), dtype=x.dtype)
    out[:, : x.shape[1]] = x
    return out, None


_defop("zero_pad", 1, _zero_pad_fwd, lambda g, xs, y, c, a: [g[:, : xs[0].shape[1]].copy()])


def _slice_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    x = xs[0]
    start, stop = int(attrs["start"]), int(attrs["stop"])
    if not 0 <= start < stop <= x.shape[1]:
        raise DimensionError(f"slice_columns: [{start}, {stop}) outside {x.shape[1]} columns", shape=x.shape)
    return x[:, start:stop].copy(), None


def _slice_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, cache: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    gx = np.zeros(xs[0].shape, dtype=np.result_type(xs[0], g))
    gx[:, int(attrs["start"]) : int(attrs["stop"])] = g
    return [gx]


_defop("slice_columns", 1, _slice_fwd, _slice_bwd)


def _concat_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    a, b = xs
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"concat_columns: row counts {a.shape[0]} and {b.shape[0]} differ", shapes=[a.shape, b.shape])
    return np.concatenate([a, b], axis=1), None


def _concat_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, cache: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    d = xs[0].shape[1]
    return [g[:, :d].copy(), g[:, d:].copy()]


_defop("concat_columns", 2, _concat_fwd, _concat_bwd)


# —— group_sort —— #


def _group_sort_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    x = xs[0]
    _require_real("group_sort", x)
    n, d = x.shape
    if d % GROUP_SIZE:
        raise DimensionError(f"group_sort: feature dimension {d} not divisible by {GROUP_SIZE}", shape=x.shape)
    pairs = x.reshape(n, d // GROUP_SIZE, GROUP_SIZE)
    # 严格大于才交换：相等时保持原顺序（稳定）| swap only on strict inequality, ties keep order
    swap = pairs[..., 0] > pairs[..., 1]
    out = pairs.copy()
    out[swap] = pairs[swap][:, ::-1]
    return out.reshape(n, d), swap


def _group_sort_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, swap: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    n, d = g.shape
    gp = g.reshape(n, d // GROUP_SIZE, GROUP_SIZE)
    gx = gp.copy()
    gx[swap] = gp[swap][:, ::-1]
    return [gx.reshape(n, d)]


_defop("group_sort", 1, _group_sort_fwd, _group_sort_bwd)


# —— elementwise nonlinearities —— #

_defop("sin", 1, lambda xs, attrs: (np.sin(xs[0]), None), lambda g, xs, y, c, a: [np.conj(np.cos(xs[0])) * g])


def _relu_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    _require_real("relu", xs[0])
    return np.maximum(xs[0], 0.0), None


_defop("relu", 1, _relu_fwd, lambda g, xs, y, c, a: [g * (xs[0] > 0)])
_defop("real_part", 1, lambda xs, attrs: (np.real(xs[0]).copy(), None), lambda g, xs, y, c, a: [np.real(g).copy()])


# —— truncated_exp_operator —— #


def _texp_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    """
    Σ_{i<=T} L^i(X)/i!，L(X) = A X W，Horner 递推 q_T = X, q_{k-1} = X + A q_k W / k。
    The intermediates q_T..q_1 are cached for the exact backward pass through the recursion.
    """
    a, x, w = xs
    t_max = int(attrs["t_max"])
    if a.shape != (x.shape[0], x.shape[0]):
        raise DimensionError(f"truncated_exp_operator: A {a.shape} incompatible with X {x.shape}", shapes=[a.shape, x.shape])
    if w.shape != (x.shape[1], x.shape[1]):
        raise DimensionError(f"truncated_exp_operator: W {w.shape} incompatible with X {x.shape}", shapes=[w.shape, x.shape])
    if t_max < 0:
        raise ArgumentError(f"t_max must be >= 0, got {t_max}")
    q = x
    trail: list[DenseMatrix] = []
    for k in range(t_max, 0, -1):
        trail.append(q)
        q = x + (a @ q @ w) / k
    # trail[i] 为 q_{T-i}；反向时按 k = 1..T 使用 | trail[i] holds q_{T-i}
    return q, trail


def _texp_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, trail: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    a, x, w = xs
    t_max = int(attrs["t_max"])
    a_h, w_h = conj_transpose(a), conj_transpose(w)
    ga = np.zeros_like(a, dtype=np.result_type(a, g, x, w))
    gw = np.zeros_like(w, dtype=np.result_type(a, g, x, w))
    gx = np.zeros_like(x, dtype=np.result_type(a, g, x, w))
    gq = g
    for k in range(1, t_max + 1):
        q_k = trail[t_max - k]
        gx = gx + gq
        ga = ga + gq @ conj_transpose(q_k @ w) / k
        gw = gw + conj_transpose(a @ q_k) @ gq / k
        gq = a_h @ gq @ w_h / k
    gx = gx + gq
    return [ga, gx, gw]


_defop("truncated_exp_operator", 3, _texp_fwd, _texp_bwd)


# —— reductions and losses —— #


def _mse_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    p, t = xs
    _same_shape("mse", p, t)
    diff = p - t
    return np.array([[np.mean(np.abs(diff) ** 2)]]), diff


def _mse_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, diff: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    scale = 2.0 * g[0, 0] / diff.size
    return [scale * diff, -scale * diff]


_defop("mse", 2, _mse_fwd, _mse_bwd)
_defop(
    "sum",
    1,
    lambda xs, attrs: (np.array([[np.sum(xs[0])]]), None),
    lambda g, xs, y, c, a: [np.full(xs[0].shape, g[0, 0])],
)


def _trace_fwd(xs: Sequence[DenseMatrix], attrs: dict[str, Any]) -> tuple[DenseMatrix, Any]:
    w, x = xs
    if w.shape != (x.shape[1], x.shape[0]):
        raise DimensionError(f"trace_product: W {w.shape} incompatible with X {x.shape}", shapes=[w.shape, x.shape])
    return np.array([[np.trace(w @ x)]]), None


def _trace_bwd(g: DenseMatrix, xs: Sequence[DenseMatrix], y: DenseMatrix, cache: Any, attrs: dict[str, Any]) -> list[DenseMatrix | None]:
    w, x = xs
    s = g[0, 0]
    return [s * conj_transpose(x), s * conj_transpose(w)]


_defop("trace_product", 2, _trace_fwd, _trace_bwd)
