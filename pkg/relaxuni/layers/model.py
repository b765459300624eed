# filename: model.py
# @Time    : 2025/11/18 11:20
# @Software: PyCharm
"""
模型装配 | Model assembly

build_model 按 ModelSpec 初始化参数；Model.forward 把整条层序列记录到磁带上。
build_model initializes parameters from a ModelSpec; Model.forward records the whole layer sequence on a tape.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.autodiff.tape import NodeId, Param, Tape
from relaxuni.exceptions import ArgumentError, DimensionError, SpecError
from relaxuni.graph.graph import Graph, gcn_adjacency, normalized_adjacency
from relaxuni.layers import conv
from relaxuni.layers.spec import LayerSpec, ModelSpec, parameter_count
from relaxuni.linalg.dense import DenseMatrix, as_dense
from relaxuni.mesh.operators import MeshOperators
from relaxuni.schema import LayerKind, OperatorSource
from relaxuni.utils import seed_stream

__all__ = ["Model", "build_model", "init_param"]


def _orthogonal(rng: np.random.Generator, n: int) -> npt.NDArray[np.float64]:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    # 固定符号，得到 Haar 分布 | sign fix gives the Haar distribution
    return q * np.sign(np.diag(r))[None, :]


def init_param(layer: LayerSpec, name: str, shape: tuple[int, int], rng: np.random.Generator, scale: float = 1.0) -> DenseMatrix:
    """
    参数初始化 | Parameter initialization

    - 自由矩阵 S 与解码器权重：N(0, (scale/√width)²) | free matrices and decoder weights
    - sep_uni 的 t：1 | the diffusion time t starts at 1
    - gcn 方阵权重：随机正交 | square gcn weights: random orthogonal
    - 偏置：0 | biases: zero
    """
    if name == "t":
        return np.ones(shape)
    if name.startswith("b"):
        return np.zeros(shape, dtype=np.complex128 if layer.is_complex else np.float64)
    if layer.kind == LayerKind.GCN and shape[0] == shape[1]:
        q = _orthogonal(rng, shape[0])
        return q.astype(np.complex128) if layer.is_complex else q
    std = scale / np.sqrt(shape[0])
    if layer.is_complex:
        # 实部与虚部各占一半方差 | real and imaginary parts share the variance
        return (rng.normal(scale=std, size=shape) + 1j * rng.normal(scale=std, size=shape)) / np.sqrt(2.0)
    return rng.normal(scale=std, size=shape)


@dataclass
class Model:
    """
    可在磁带上前向计算的模型 | Model whose forward pass is recorded on a tape

    前向只读参数，可在多个线程上以不同磁带并行求值；训练时参数归单一所有者修改。
    The forward pass only reads parameters, so evaluation may run on several threads with separate
    tapes; training mutates them from a single owner.

    Attributes:
        spec: Architecture
        layer_params: One name -> Param mapping per layer
    """

    spec: ModelSpec
    layer_params: list[dict[str, Param]]

    def parameters(self) -> list[Param]:
        return [p for params in self.layer_params for p in params.values()]

    def named_parameters(self) -> Iterator[tuple[str, Param]]:
        for p in self.parameters():
            yield p.name, p

    @property
    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    # —— operators —— #

    def operator(self, source: Graph | MeshOperators | npt.ArrayLike) -> DenseMatrix:
        """
        按 operator_source 取归一化邻接 | Normalized adjacency for the configured operator source

        Args:
            source: Graph (graph sources), MeshOperators (mesh source), or a ready n×n matrix

        Raises:
            ArgumentError: If the source type does not match operator_source
            PreconditionError: If mesh operators carry negative weights
        """
        kind = self.spec.operator_source
        if isinstance(source, Graph):
            if kind == OperatorSource.GRAPH_GCN:
                return gcn_adjacency(source)
            if kind == OperatorSource.GRAPH_NORMALIZED:
                return normalized_adjacency(source)
            raise ArgumentError(f"operator source {kind.value} needs MeshOperators, got a Graph", source=kind.value)
        if isinstance(source, MeshOperators):
            if kind != OperatorSource.MESH_WEIGHTED:
                raise ArgumentError(f"operator source {kind.value} needs a Graph, got MeshOperators", source=kind.value)
            return conv.mesh_adjacency(source)
        return as_dense(source, name="operator")

    # —— forward —— #

    def forward(self, tape: Tape, x: NodeId, a: NodeId) -> NodeId:
        """
        记录整条层序列 | Record the full layer sequence

        复数层之前把实特征提升为复数，实数层之前取实部；输出总为实数。
        Real features are promoted before complex layers and reduced to their real part before real
        layers; the output is always real.

        Args:
            tape: Tape to record on
            x: Input node n×(input_window·channels)
            a: Normalized adjacency node n×n

        Returns:
            NodeId: Output node n×channels
        """
        h = x
        for layer, params in zip(self.spec.layers, self.layer_params, strict=True):
            h = self._match_scalar_kind(tape, h, layer)
            h = self._apply(tape, layer, params, h, a)
        if np.iscomplexobj(tape.value(h)):
            h = tape.real_part(h)
        return h

    @staticmethod
    def _match_scalar_kind(tape: Tape, h: NodeId, layer: LayerSpec) -> NodeId:
        is_complex = np.iscomplexobj(tape.value(h))
        if layer.is_complex and not is_complex:
            return tape.scale(h, 1.0 + 0.0j)
        if not layer.is_complex and is_complex and layer.kind not in (LayerKind.ZERO_PAD, LayerKind.IDENTITY):
            return tape.real_part(h)
        return h

    def _apply(self, tape: Tape, layer: LayerSpec, params: dict[str, Param], h: NodeId, a: NodeId) -> NodeId:
        match layer.kind:
            case LayerKind.GCN:
                return conv.gcn_layer(tape, h, a, params["W"], layer.activation)
            case LayerKind.SEP_UNI:
                return conv.sep_uni_conv(tape, h, a, params["t"], params["S"], t_max=layer.t_max)
            case LayerKind.LIE_UNI:
                return conv.lie_uni_conv(tape, h, a, params["S"], t_max=layer.t_max)
            case LayerKind.TAYLOR_RELAXED:
                return conv.taylor_relaxed_conv(tape, h, a, params["S"], t_max=layer.t_max)
            case LayerKind.ZERO_PAD:
                return conv.zero_pad(tape, h, layer.width_out)
            case LayerKind.GROUP_SORT:
                return tape.group_sort(h)
            case LayerKind.MLP_SIN:
                return conv.mlp_sin(tape, h, params["W1"], params["b1"], params["W2"], params["b2"])
            case LayerKind.GCN_DECODER:
                return conv.gcn_decoder(tape, h, a, params["W"])
            case LayerKind.LINEAR:
                return conv.linear(tape, h, params["W"])
            case LayerKind.IDENTITY:
                return h
        raise SpecError(f"unsupported layer kind {layer.kind}")

    def encode(self, tape: Tape, x: NodeId, a: NodeId) -> NodeId:
        """只跑编码器（解码器之前的层）| Run the layers before the decoder only"""
        h = x
        for layer, params in zip(self.spec.layers[:-1], self.layer_params[:-1], strict=True):
            h = self._match_scalar_kind(tape, h, layer)
            h = self._apply(tape, layer, params, h, a)
        return h

    def predict(self, x: npt.ArrayLike, operator: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """
        无梯度的一次前向 | One forward pass without gradients

        Raises:
            DimensionError: If x does not have input_window·channels columns
        """
        arr = np.asarray(x, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        expected = self.spec.input_window * self.spec.channels
        if arr.shape[1] != expected:
            raise DimensionError(f"{self.spec.name} expects {expected} input columns, got {arr.shape[1]}", shape=arr.shape)
        tape = Tape()
        out = self.forward(tape, tape.constant(arr), tape.constant(operator))
        return np.real(tape.value(out)).astype(np.float64)


def build_model(spec: ModelSpec) -> Model:
    """
    按结构描述构建模型并初始化参数 | Build a model and initialize its parameters

    参数名形如 "3.S"（层序号.参数名）；第 i 层的随机流为 seed_stream(spec.seed, "init", i)。
    Parameters are named "<layer index>.<name>"; layer i draws from seed_stream(spec.seed, "init", i).

    Raises:
        SpecError: If the spec is inconsistent (already raised while the spec is validated)
    """
    layer_params: list[dict[str, Param]] = []
    for i, layer in enumerate(spec.layers):
        rng = seed_stream(spec.seed, "init", i)
        params = {
            name: Param(f"{i}.{name}", init_param(layer, name, shape, rng, spec.init_scale))
            for name, shape in layer.param_shapes().items()
        }
        layer_params.append(params)
    model = Model(spec=spec, layer_params=layer_params)
    expected = parameter_count(spec)
    if model.parameter_count != expected:
        raise SpecError(f"parameter count {model.parameter_count} does not match the spec ({expected})")
    logger.info(f"model built name={spec.name} layers={len(spec.layers)} params={model.parameter_count}")
    return model
