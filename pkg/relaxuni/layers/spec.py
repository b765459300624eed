# filename: spec.py
# @Time    : 2025/11/18 09:20
# @Software: PyCharm
"""
层与模型的结构描述 | Layer and model descriptions

结构描述只含超参数；参数张量由 build_model 按描述初始化。
Descriptions hold hyperparameters only; build_model initializes the parameter tensors from them.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from relaxuni.autodiff.ops import GROUP_SIZE
from relaxuni.exceptions import LayerConfigurationError, SpecError
from relaxuni.schema import Activation, LayerKind, OperatorSource, ScalarKind

__all__ = [
    "DEFAULT_T_MAX",
    "RELAXED_T_MAX",
    "EXPONENTIAL_KINDS",
    "UNITARY_KINDS",
    "LayerSpec",
    "ModelSpec",
    "gcn_spec",
    "lie_unigraph_spec",
    "parameter_count",
    "r_unigraph_spec",
    "r_unimesh_spec",
    "sep_unigraph_spec",
]

DEFAULT_T_MAX = 10
RELAXED_T_MAX = 3

EXPONENTIAL_KINDS = frozenset({LayerKind.SEP_UNI, LayerKind.LIE_UNI, LayerKind.TAYLOR_RELAXED})
# 不改变通道数的层 | layers that keep the channel count
UNITARY_KINDS = EXPONENTIAL_KINDS | {LayerKind.GROUP_SORT, LayerKind.IDENTITY}


class LayerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: LayerKind = Field(title="层类型", description="Layer family")
    width_in: int = Field(ge=1, title="输入通道数", description="Input channel count")
    width_out: int = Field(ge=1, title="输出通道数", description="Output channel count")
    t_max: int = Field(default=DEFAULT_T_MAX, title="泰勒截断阶", description="Truncation order of exponential layers")
    scalar_kind: ScalarKind = Field(default=ScalarKind.REAL64, title="标量类型", description="real64 or complex128")
    activation: Activation = Field(default=Activation.IDENTITY, title="激活函数", description="Activation applied after gcn layers")
    hidden: int | None = Field(default=None, ge=1, title="隐藏宽度", description="Hidden width of the mlp_sin decoder")

    @model_validator(mode="after")
    def _check(self) -> LayerSpec:
        if self.kind in UNITARY_KINDS and self.width_in != self.width_out:
            raise SpecError(
                f"{self.kind.value} layers cannot change the channel dimension ({self.width_in} -> {self.width_out})",
                kind=self.kind.value,
            )
        if self.kind == LayerKind.ZERO_PAD and self.width_out < self.width_in:
            raise SpecError(f"zero_pad needs width_out >= width_in, got {self.width_in} -> {self.width_out}")
        if self.kind in EXPONENTIAL_KINDS and self.t_max < 1:
            raise SpecError(f"t_max must be >= 1 for {self.kind.value}, got {self.t_max}", t_max=self.t_max)
        if self.kind == LayerKind.SEP_UNI and self.scalar_kind != ScalarKind.COMPLEX128:
            raise LayerConfigurationError("sep_uni requires complex128: exp(i·Ã·t) is complex by definition")
        if self.activation == Activation.RELU and self.scalar_kind == ScalarKind.COMPLEX128:
            raise LayerConfigurationError("relu is undefined on complex features")
        if self.kind == LayerKind.GROUP_SORT and self.scalar_kind == ScalarKind.COMPLEX128:
            raise LayerConfigurationError("group_sort is undefined on complex features")
        if self.kind == LayerKind.GROUP_SORT and self.width_in % GROUP_SIZE:
            raise SpecError(f"group_sort needs a width divisible by {GROUP_SIZE}, got {self.width_in}", width=self.width_in)
        return self

    @property
    def is_complex(self) -> bool:
        return self.scalar_kind == ScalarKind.COMPLEX128

    def param_shapes(self) -> dict[str, tuple[int, int]]:
        """
        参数名到形状 | Parameter name to shape

        Returns:
            dict: Ordered mapping; empty for parameter-free layers
        """
        w_in, w_out = self.width_in, self.width_out
        match self.kind:
            case LayerKind.GCN | LayerKind.GCN_DECODER | LayerKind.LINEAR:
                return {"W": (w_in, w_out)}
            case LayerKind.SEP_UNI:
                return {"t": (1, 1), "S": (w_in, w_in)}
            case LayerKind.LIE_UNI | LayerKind.TAYLOR_RELAXED:
                return {"S": (w_in, w_in)}
            case LayerKind.MLP_SIN:
                h = self.hidden or w_in
                return {"W1": (w_in, h), "b1": (1, h), "W2": (h, w_out), "b2": (1, w_out)}
            case _:
                return {}

    def param_count(self) -> int:
        total = 0
        for name, (r, c) in self.param_shapes().items():
            # 可分离层的扩散时间 t 恒为实数 | the diffusion time t of sep_uni stays real
            factor = 2 if self.is_complex and name != "t" else 1
            total += factor * r * c
        return total


class ModelSpec(BaseModel):
    """
    模型结构 | Model architecture

    Attributes:
        name: Free-form label used in logs and reports
        layers: Ordered layer list (encoder then decoder)
        operator_source: Which normalized adjacency the convolutions use
        input_window: Number of stacked past frames fed as channels
        channels: Feature channels of one frame
        seed: Initialization seed
        init_scale: Multiplier on the default initialization standard deviation 1/√width
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "model"
    layers: list[LayerSpec] = Field(default_factory=list)
    operator_source: OperatorSource = OperatorSource.GRAPH_NORMALIZED
    input_window: int = Field(default=1, ge=1)
    channels: int = Field(default=1, ge=1)
    seed: int = 0
    init_scale: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check_widths(self) -> ModelSpec:
        if not self.layers:
            if self.input_window != 1:
                raise SpecError("a model without layers only maps a single frame to itself")
            return self
        expected = self.input_window * self.channels
        if self.layers[0].width_in != expected:
            raise SpecError(
                f"first layer expects {self.layers[0].width_in} channels, input provides {expected}",
                layer=0,
            )
        for i, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.width_out != b.width_in:
                raise SpecError(f"layer {i} outputs {a.width_out} channels, layer {i + 1} expects {b.width_in}", layer=i + 1)
        if self.layers[-1].width_out != self.channels:
            raise SpecError(f"last layer outputs {self.layers[-1].width_out} channels, frames have {self.channels}", layer=len(self.layers) - 1)
        return self


def parameter_count(spec: ModelSpec) -> int:
    """实参数自由度总数（复数计两次）| Real degrees of freedom (complex entries count twice)"""
    return sum(layer.param_count() for layer in spec.layers)


# —— presets —— #


def gcn_spec(
    channels: int = 1,
    hidden: int = 64,
    depth: int = 4,
    input_window: int = 1,
    activation: Activation = Activation.RELU,
    operator_source: OperatorSource = OperatorSource.GRAPH_GCN,
    seed: int = 0,
) -> ModelSpec:
    """GCN 基线：depth 层 ÃXW + 激活，线性读出 | GCN baseline with a linear readout"""
    d_in = channels * input_window
    layers = [LayerSpec(kind=LayerKind.GCN, width_in=d_in, width_out=hidden, activation=activation)]
    layers += [LayerSpec(kind=LayerKind.GCN, width_in=hidden, width_out=hidden, activation=activation) for _ in range(depth - 1)]
    layers.append(LayerSpec(kind=LayerKind.LINEAR, width_in=hidden, width_out=channels))
    return ModelSpec(name="gcn", layers=layers, operator_source=operator_source, input_window=input_window, channels=channels, seed=seed)


def _unitary_stack(
    name: str,
    kind: LayerKind,
    channels: int,
    hidden: int,
    depth: int,
    t_max: int,
    input_window: int,
    scalar_kind: ScalarKind,
    operator_source: OperatorSource,
    seed: int,
    group_sort: bool = False,
    decoder: LayerKind = LayerKind.LINEAR,
) -> ModelSpec:
    d_in = channels * input_window
    layers = [LayerSpec(kind=LayerKind.ZERO_PAD, width_in=d_in, width_out=hidden)]
    for _ in range(depth):
        layers.append(LayerSpec(kind=kind, width_in=hidden, width_out=hidden, t_max=t_max, scalar_kind=scalar_kind))
        if group_sort:
            layers.append(LayerSpec(kind=LayerKind.GROUP_SORT, width_in=hidden, width_out=hidden))
    layers.append(LayerSpec(kind=decoder, width_in=hidden, width_out=channels))
    return ModelSpec(name=name, layers=layers, operator_source=operator_source, input_window=input_window, channels=channels, seed=seed)


def lie_unigraph_spec(channels: int = 1, hidden: int = 64, depth: int = 4, t_max: int = DEFAULT_T_MAX, input_window: int = 1, seed: int = 0) -> ModelSpec:
    """zero_pad → depth × Lie 酉卷积 → 线性读出 | zero_pad, Lie unitary convolutions, linear readout"""
    return _unitary_stack("lie_unigraph", LayerKind.LIE_UNI, channels, hidden, depth, t_max, input_window, ScalarKind.REAL64, OperatorSource.GRAPH_NORMALIZED, seed)


def r_unigraph_spec(channels: int = 1, hidden: int = 64, depth: int = 4, t_max: int = RELAXED_T_MAX, input_window: int = 1, seed: int = 0) -> ModelSpec:
    """泰勒松弛编码器 + 线性读出 | Taylor-relaxed encoder with a linear readout"""
    return _unitary_stack("r_unigraph", LayerKind.TAYLOR_RELAXED, channels, hidden, depth, t_max, input_window, ScalarKind.REAL64, OperatorSource.GRAPH_NORMALIZED, seed)


def sep_unigraph_spec(channels: int = 1, hidden: int = 32, depth: int = 4, t_max: int = DEFAULT_T_MAX, input_window: int = 1, seed: int = 0) -> ModelSpec:
    """复数可分离酉编码器，读出前取实部 | Complex separable encoder, real part taken before the readout"""
    return _unitary_stack("sep_unigraph", LayerKind.SEP_UNI, channels, hidden, depth, t_max, input_window, ScalarKind.COMPLEX128, OperatorSource.GRAPH_NORMALIZED, seed)


def r_unimesh_spec(
    channels: int = 1,
    hidden: int = 64,
    depth: int = 4,
    t_max: int = RELAXED_T_MAX,
    input_window: int = 5,
    decoder: LayerKind = LayerKind.MLP_SIN,
    seed: int = 0,
) -> ModelSpec:
    """
    zero_pad → depth × (网格 Lie 卷积 + GroupSort) → 解码器
    zero_pad, depth × (mesh Lie convolution + GroupSort), then an mlp_sin or gcn_decoder head.
    """
    if decoder not in (LayerKind.MLP_SIN, LayerKind.GCN_DECODER):
        raise SpecError(f"r_unimesh decoder must be mlp_sin or gcn_decoder, got {decoder.value}")
    kind = LayerKind.LIE_UNI if t_max >= DEFAULT_T_MAX else LayerKind.TAYLOR_RELAXED
    return _unitary_stack(
        "r_unimesh", kind, channels, hidden, depth, t_max, input_window, ScalarKind.REAL64, OperatorSource.MESH_WEIGHTED, seed,
        group_sort=True, decoder=decoder,
    )
