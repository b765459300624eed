"""
神经网络层与模型装配 | Neural layers and model assembly
"""

from relaxuni.layers.checkpoint import load_checkpoint, read_tensors, save_checkpoint, write_tensors
from relaxuni.layers.conv import (
    activate,
    add_bias,
    gcn_decoder,
    gcn_layer,
    lie_uni_conv,
    linear,
    mesh_adjacency,
    mlp_sin,
    sep_uni_conv,
    taylor_relaxed_conv,
    uni_mesh_conv,
    unitary_node,
    zero_pad,
)
from relaxuni.layers.model import Model, build_model, init_param
from relaxuni.layers.spec import (
    DEFAULT_T_MAX,
    RELAXED_T_MAX,
    LayerSpec,
    ModelSpec,
    gcn_spec,
    lie_unigraph_spec,
    parameter_count,
    r_unigraph_spec,
    r_unimesh_spec,
    sep_unigraph_spec,
)

__all__ = [
    "DEFAULT_T_MAX",
    "RELAXED_T_MAX",
    "LayerSpec",
    "Model",
    "ModelSpec",
    "activate",
    "add_bias",
    "build_model",
    "gcn_decoder",
    "gcn_layer",
    "gcn_spec",
    "init_param",
    "lie_uni_conv",
    "lie_unigraph_spec",
    "linear",
    "load_checkpoint",
    "mesh_adjacency",
    "mlp_sin",
    "parameter_count",
    "r_unigraph_spec",
    "r_unimesh_spec",
    "read_tensors",
    "save_checkpoint",
    "sep_uni_conv",
    "sep_unigraph_spec",
    "taylor_relaxed_conv",
    "uni_mesh_conv",
    "unitary_node",
    "write_tensors",
    "zero_pad",
]
