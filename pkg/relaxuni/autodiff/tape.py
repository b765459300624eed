# filename: tape.py
# @Time    : 2025/11/13 10:02
# @Software: PyCharm
"""
反向模式自动微分磁带 | Reverse-mode autodiff tape

节点按记录顺序追加，反向传播沿逆序扫描一次。参数（Param）的梯度在多次使用时累加。
Nodes are appended in recording order and the backward pass sweeps them once in reverse. Gradients of
a Param used several times accumulate.

Example:
    >>> w = Param("w", np.eye(2))
    >>> tape = Tape()
    >>> x = tape.constant(np.ones((3, 2)))
    >>> loss = tape.mse(tape.matmul(x, tape.param(w)), tape.constant(np.zeros((3, 2))))
    >>> tape.backward(loss)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.autodiff.ops import OPS
from relaxuni.exceptions import ArgumentError, ContractError, DimensionError
from relaxuni.linalg.dense import DenseMatrix, as_dense

__all__ = ["Node", "Param", "Tape", "NodeId"]

NodeId = int

_LEAF_KINDS = frozenset({"param", "constant"})


@dataclass(eq=False)
class Param:
    """
    可训练参数 | Trainable parameter

    Attributes:
        name: Unique name inside a model, used for checkpoints
        value: Current value (float64 or complex128)
        grad: Accumulated gradient, same shape and scalar kind as `value`
    """

    name: str
    value: DenseMatrix
    grad: DenseMatrix = field(init=False)

    def __post_init__(self) -> None:
        self.value = as_dense(self.value, name=self.name)
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, int]:
        return self.value.shape  # type: ignore[return-value]

    @property
    def size(self) -> int:
        """Real degrees of freedom (complex entries count twice)."""
        return int(self.value.size * (2 if np.iscomplexobj(self.value) else 1))

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.value)


@dataclass(slots=True)
class Node:
    id: NodeId
    kind: str
    inputs: tuple[NodeId, ...]
    value: DenseMatrix
    attrs: dict[str, Any] = field(default_factory=dict)
    param: Param | None = None
    cache: Any = None


class Tape:
    """
    计算图记录器 | Computation recorder

    每个算子方法立即计算前向值并返回节点 id。形状不匹配抛出 DimensionError，
    context["node_id"] 为将要记录的节点 id。
    Each op method computes the forward value eagerly and returns a node id. Shape mismatches raise
    DimensionError whose context["node_id"] is the id the node would have received.
    """

    def __init__(self) -> None:
        self.nodes: list[Node] = []
        self._param_nodes: dict[int, NodeId] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def value(self, node_id: NodeId) -> DenseMatrix:
        return self.nodes[node_id].value

    # —— leaves —— #

    def constant(self, value: npt.ArrayLike) -> NodeId:
        node = Node(id=len(self.nodes), kind="constant", inputs=(), value=as_dense(value, name="constant"))
        self.nodes.append(node)
        return node.id

    def param(self, p: Param) -> NodeId:
        """同一 Param 在一条磁带上只建一个叶节点 | One leaf per Param per tape."""
        key = id(p)
        if key in self._param_nodes:
            return self._param_nodes[key]
        node = Node(id=len(self.nodes), kind="param", inputs=(), value=p.value, param=p)
        self.nodes.append(node)
        self._param_nodes[key] = node.id
        return node.id

    # —— generic record —— #

    def record(self, kind: str, inputs: tuple[NodeId, ...], **attrs: Any) -> NodeId:
        if kind not in OPS:
            raise ArgumentError(f"Unknown op kind: {kind}", kind=kind)
        op = OPS[kind]
        if op.arity >= 0 and len(inputs) != op.arity:
            raise ArgumentError(f"{kind} takes {op.arity} inputs, got {len(inputs)}", kind=kind)
        for i in inputs:
            if not 0 <= i < len(self.nodes):
                raise ArgumentError(f"{kind}: input node {i} is not on this tape", node_id=i)
        node_id = len(self.nodes)
        values = [self.nodes[i].value for i in inputs]
        try:
            value, cache = op.forward(values, attrs)
        except DimensionError as e:
            raise DimensionError(e.message, e.detail, node_id=node_id, kind=kind, **e.context) from e
        self.nodes.append(Node(id=node_id, kind=kind, inputs=inputs, value=value, attrs=attrs, cache=cache))
        return node_id

    # —— op shorthands —— #

    def matmul(self, a: NodeId, b: NodeId) -> NodeId:
        return self.record("matmul", (a, b))

    def add(self, a: NodeId, b: NodeId) -> NodeId:
        return self.record("add", (a, b))

    def subtract(self, a: NodeId, b: NodeId) -> NodeId:
        return self.record("subtract", (a, b))

    def scalar_multiply(self, s: NodeId, x: NodeId) -> NodeId:
        """`s` 为 1×1 节点 | `s` is a 1x1 node."""
        return self.record("scalar_multiply", (s, x))

    def scale(self, x: NodeId, c: complex | float) -> NodeId:
        """乘以数值常数 | Multiply by a numeric constant."""
        return self.record("scalar_multiply", (x,), scalar=c)

    def hadamard(self, a: NodeId, b: NodeId) -> NodeId:
        return self.record("hadamard", (a, b))

    def transpose_conj(self, a: NodeId) -> NodeId:
        return self.record("transpose_conj", (a,))

    def zero_pad(self, x: NodeId, d_out: int) -> NodeId:
        return self.record("zero_pad", (x,), d_out=d_out)

    def group_sort(self, x: NodeId) -> NodeId:
        return self.record("group_sort", (x,))

    def sin(self, x: NodeId) -> NodeId:
        return self.record("sin", (x,))

    def relu(self, x: NodeId) -> NodeId:
        return self.record("relu", (x,))

    def real_part(self, x: NodeId) -> NodeId:
        return self.record("real_part", (x,))

    def truncated_exp_operator(self, a: NodeId, x: NodeId, w: NodeId, t_max: int) -> NodeId:
        return self.record("truncated_exp_operator", (a, x, w), t_max=t_max)

    def slice_columns(self, x: NodeId, start: int, stop: int) -> NodeId:
        return self.record("slice_columns", (x,), start=start, stop=stop)

    def concat_columns(self, a: NodeId, b: NodeId) -> NodeId:
        return self.record("concat_columns", (a, b))

    def mse(self, prediction: NodeId, target: NodeId) -> NodeId:
        return self.record("mse", (prediction, target))

    def sum(self, x: NodeId) -> NodeId:
        return self.record("sum", (x,))

    def trace_product(self, w: NodeId, x: NodeId) -> NodeId:
        return self.record("trace_product", (w, x))

    # —— backward —— #

    def backward(self, loss: NodeId) -> None:
        """
        从 1×1 实值损失节点反向传播，并把梯度累加到各 Param.grad。
        Back-propagate from a 1x1 real loss node, accumulating into each Param.grad.

        Raises:
            ContractError: If `loss` is not a 1x1 node with a real value
        """
        root = self.nodes[loss]
        if root.value.shape != (1, 1):
            raise ContractError(f"backward requires a 1x1 loss, got shape {root.value.shape}", node_id=loss)
        if np.iscomplexobj(root.value) and root.value[0, 0].imag != 0.0:
            raise ContractError("backward requires a real-valued loss", node_id=loss)

        grads: dict[NodeId, DenseMatrix] = {loss: np.ones((1, 1))}
        for node in reversed(self.nodes[: loss + 1]):
            g = grads.pop(node.id, None)
            if g is None:
                continue
            if node.kind in _LEAF_KINDS:
                if node.param is not None:
                    p = node.param
                    p.grad = p.grad + (g if np.iscomplexobj(p.value) else np.real(g))
                continue
            xs = [self.nodes[i].value for i in node.inputs]
            input_grads = OPS[node.kind].backward(g, xs, node.value, node.cache, node.attrs)
            for i, gi in zip(node.inputs, input_grads, strict=True):
                if gi is None:
                    continue
                # 实值节点只保留实部 | real-valued nodes keep the real part only
                if not np.iscomplexobj(self.nodes[i].value):
                    gi = np.real(gi)
                grads[i] = grads[i] + gi if i in grads else gi
        logger.trace(f"backward done loss_node={loss} nodes={len(self.nodes)}")
