# filename: conv.py
# @Time    : 2025/11/18 10:05
# @Software: PyCharm
"""
卷积层与读出层（在磁带上记录）| Convolution and readout layers, recorded on a tape

所有层函数接收节点 id（特征 X 与归一化邻接 Ã）和 Param，返回输出节点 id。
Every layer function takes node ids (features X, normalized adjacency Ã) and Params, and returns the output node id.

- gcn_layer:            act(ÃXW)
- sep_uni_conv:         exp(i·Ã·t)·X·U，U = exp(S − S^†)
- lie_uni_conv:         Σ_{k<=T} L^k(X)/k!，L(X) = ÃXW，W = S − S^†
- taylor_relaxed_conv:  lie_uni_conv 的小 T 版本 | lie_uni_conv at small T
- uni_mesh_conv:        上述两种，Ã 取网格加权邻接 | either variant on the mesh-weighted adjacency
"""

import math
from typing import Literal

import numpy as np

from relaxuni.autodiff.tape import NodeId, Param, Tape
from relaxuni.exceptions import ArgumentError, DimensionError, LayerConfigurationError, PreconditionError
from relaxuni.layers.spec import DEFAULT_T_MAX, RELAXED_T_MAX
from relaxuni.linalg.dense import DenseMatrix
from relaxuni.mesh.operators import WEIGHT_TOL, MeshOperators
from relaxuni.schema import Activation

__all__ = [
    "MeshVariant",
    "UNITARY_SERIES_ORDER",
    "activate",
    "add_bias",
    "gcn_decoder",
    "gcn_layer",
    "lie_uni_conv",
    "linear",
    "mesh_adjacency",
    "mlp_sin",
    "sep_uni_conv",
    "taylor_relaxed_conv",
    "uni_mesh_conv",
    "unitary_node",
    "zero_pad",
]

MeshVariant = Literal["sep", "lie"]
UNITARY_SERIES_ORDER = 12
# 缩放后生成元的范数上限 | norm cap of the scaled generator
_SQUARING_THRESHOLD = 0.5


def activate(tape: Tape, x: NodeId, activation: Activation) -> NodeId:
    match activation:
        case Activation.RELU:
            return tape.relu(x)
        case Activation.SIN:
            return tape.sin(x)
        case _:
            return x


def _require_square_operator(tape: Tape, x: NodeId, a: NodeId, layer: str) -> None:
    n = tape.value(x).shape[0]
    if tape.value(a).shape != (n, n):
        raise DimensionError(f"{layer}: operator {tape.value(a).shape} incompatible with features {tape.value(x).shape}", layer=layer)


def gcn_layer(tape: Tape, x: NodeId, a: NodeId, w: Param, activation: Activation = Activation.IDENTITY) -> NodeId:
    """
    act(ÃXW)

    Args:
        tape: Tape to record on
        x: Features n×d_in
        a: Normalized adjacency n×n
        w: Weight d_in×d_out
        activation: Activation applied to ÃXW

    Raises:
        DimensionError: If the shapes do not conform
    """
    _require_square_operator(tape, x, a, "gcn")
    return activate(tape, tape.matmul(tape.matmul(a, x), tape.param(w)), activation)


def unitary_node(tape: Tape, s: NodeId) -> NodeId:
    """
    可微的 U = exp(S − S^†)：缩放平方 + 截断级数 | differentiable U via scaling and squaring

    生成元先缩放到范数 <= 0.5，级数截断阶 12，再平方回去；数值上与 unitary_from_free 一致。
    The generator is scaled to norm <= 0.5, summed to order 12 and squared back; numerically this agrees
    with unitary_from_free.
    """
    generator = tape.subtract(s, tape.transpose_conj(s))
    norm = float(np.linalg.norm(tape.value(generator)))
    squarings = max(0, math.ceil(math.log2(norm / _SQUARING_THRESHOLD))) if norm > 0 else 0
    scaled = tape.scale(generator, 2.0**-squarings) if squarings else generator
    eye = tape.constant(np.eye(tape.value(s).shape[0]))
    u = tape.truncated_exp_operator(scaled, eye, eye, t_max=UNITARY_SERIES_ORDER)
    for _ in range(squarings):
        u = tape.matmul(u, u)
    return u


def sep_uni_conv(tape: Tape, x: NodeId, a: NodeId, t: Param, s: Param, t_max: int = DEFAULT_T_MAX) -> NodeId:
    """
    可分离酉卷积 exp(i·Ã·t)·X·U | Separable unitary convolution

    exp(i·Ã·t) 以 T = t_max 阶 Horner 级数作用在 X 上；U = exp(S − S^†)。
    exp(i·Ã·t) is applied to X through the order-t_max Horner series; U = exp(S − S^†).

    Args:
        tape: Tape to record on
        x: Complex features n×d
        a: Normalized adjacency n×n (real symmetric)
        t: Real 1×1 diffusion time
        s: Free d×d matrix of the channel unitary
        t_max: Series order of exp(i·Ã·t)

    Raises:
        LayerConfigurationError: If the features are real
        DimensionError: If the shapes do not conform
    """
    if not np.iscomplexobj(tape.value(x)):
        raise LayerConfigurationError("sep_uni_conv needs complex features: exp(i·Ã·t) is complex")
    if np.iscomplexobj(t.value) or t.shape != (1, 1):
        raise LayerConfigurationError(f"sep_uni_conv: t must be a real 1x1 parameter, got {t.shape}", param=t.name)
    _require_square_operator(tape, x, a, "sep_uni")
    d = tape.value(x).shape[1]
    if s.shape != (d, d):
        raise DimensionError(f"sep_uni: S {s.shape} incompatible with {d} channels", param=s.name)
    generator = tape.scalar_multiply(tape.param(t), tape.scale(a, 1j))
    eye_d = tape.constant(np.eye(d))
    diffused = tape.truncated_exp_operator(generator, x, eye_d, t_max=t_max)
    return tape.matmul(diffused, unitary_node(tape, tape.param(s)))


def lie_uni_conv(tape: Tape, x: NodeId, a: NodeId, s: Param, t_max: int = DEFAULT_T_MAX) -> NodeId:
    """
    Lie 酉卷积 Σ_{k<=T} L^k(X)/k!，L(X) = Ã·X·(S − S^†) | Lie unitary convolution

    t_max = 10 时为精确酉层；小 t_max 即泰勒松弛层。
    At t_max = 10 this is the unitary layer; at small t_max it is the Taylor-relaxed layer.

    Raises:
        DimensionError: If the shapes do not conform
        ArgumentError: If t_max < 1
    """
    if t_max < 1:
        raise ArgumentError(f"t_max must be >= 1, got {t_max}", t_max=t_max)
    _require_square_operator(tape, x, a, "lie_uni")
    d = tape.value(x).shape[1]
    if s.shape != (d, d):
        raise DimensionError(f"lie_uni: S {s.shape} incompatible with {d} channels", param=s.name)
    s_node = tape.param(s)
    w = tape.subtract(s_node, tape.transpose_conj(s_node))
    return tape.truncated_exp_operator(a, x, w, t_max=t_max)


def taylor_relaxed_conv(tape: Tape, x: NodeId, a: NodeId, s: Param, t_max: int = RELAXED_T_MAX) -> NodeId:
    """泰勒松弛卷积：截断阶 t_max 的 Lie 卷积 | Lie convolution truncated at order t_max"""
    return lie_uni_conv(tape, x, a, s, t_max=t_max)


def zero_pad(tape: Tape, x: NodeId, d_out: int) -> NodeId:
    """X ↦ X ⊕ 0，补零列到 d_out | append zero columns up to d_out"""
    return tape.zero_pad(x, d_out)


def mesh_adjacency(ops: MeshOperators) -> DenseMatrix:
    """
    网格加权归一化邻接 Ã = D^{-1/2}(W ⊙ A)D^{-1/2}

    Raises:
        PreconditionError: If any off-diagonal cotangent weight is negative
    """
    negative = ops.cot_weights.negative_entries(WEIGHT_TOL)
    if negative:
        raise PreconditionError(f"{len(negative)} negative cotangent weights; rewire the mesh first", edges=[list(e) for e in negative])
    return ops.normalized_adjacency


def uni_mesh_conv(
    tape: Tape,
    x: NodeId,
    ops: MeshOperators,
    variant: MeshVariant,
    params: dict[str, Param],
    t_max: int = DEFAULT_T_MAX,
) -> NodeId:
    """
    网格上的酉卷积 | Unitary convolution on a mesh

    Args:
        tape: Tape to record on
        x: Features n×d
        ops: Mesh operators (rewired or Delaunay-verified)
        variant: "sep" (params t, S; complex features) or "lie" (param S; real S gives an orthogonal W)
        params: Layer parameters by name
        t_max: Series order

    Raises:
        PreconditionError: If the operators carry negative off-diagonal weights
        ArgumentError: On an unknown variant or missing parameter
    """
    a = tape.constant(mesh_adjacency(ops))
    try:
        if variant == "sep":
            return sep_uni_conv(tape, x, a, params["t"], params["S"], t_max=t_max)
        if variant == "lie":
            return lie_uni_conv(tape, x, a, params["S"], t_max=t_max)
    except KeyError as e:
        raise ArgumentError(f"uni_mesh_conv ({variant}) is missing parameter {e.args[0]}", variant=variant) from e
    raise ArgumentError(f"unknown mesh convolution variant {variant!r}; expected 'sep' or 'lie'", variant=variant)


# —— readouts —— #


def add_bias(tape: Tape, x: NodeId, b: Param) -> NodeId:
    """逐行加偏置 1·b | Row-broadcast bias via ones·b"""
    ones = tape.constant(np.ones((tape.value(x).shape[0], 1)))
    return tape.add(x, tape.matmul(ones, tape.param(b)))


def linear(tape: Tape, x: NodeId, w: Param) -> NodeId:
    return tape.matmul(x, tape.param(w))


def mlp_sin(tape: Tape, x: NodeId, w1: Param, b1: Param, w2: Param, b2: Param) -> NodeId:
    """逐节点两层 MLP，sin 激活 | Per-node two-layer MLP with a sin activation"""
    hidden = tape.sin(add_bias(tape, tape.matmul(x, tape.param(w1)), b1))
    return add_bias(tape, tape.matmul(hidden, tape.param(w2)), b2)


def gcn_decoder(tape: Tape, x: NodeId, a: NodeId, w: Param) -> NodeId:
    """单层 GCN 解码器，无激活 | Single GCN layer without activation"""
    return gcn_layer(tape, x, a, w, Activation.IDENTITY)
