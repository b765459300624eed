# filename: schema.py
# @Time    : 2025/11/12 10:20
# @Software: PyCharm
"""
共享枚举 | Shared enumerations

仅放置跨模块使用、且不依赖其他子包的枚举，避免循环导入。
Only enumerations used across sub-packages and free of package imports live here, to avoid import cycles.
"""

from enum import Enum


class ScalarKind(str, Enum):
    REAL64 = "real64"
    COMPLEX128 = "complex128"


class LaplacianKind(str, Enum):
    NORMALIZED = "normalized"
    COMBINATORIAL = "combinatorial"


class PdeKind(str, Enum):
    HEAT_GRAPH = "heat_graph"
    HEAT_MESH = "heat_mesh"
    WAVE_MESH = "wave_mesh"
    CAHN_HILLIARD = "cahn_hilliard"


class LayerKind(str, Enum):
    GCN = "gcn"
    SEP_UNI = "sep_uni"
    LIE_UNI = "lie_uni"
    TAYLOR_RELAXED = "taylor_relaxed"
    ZERO_PAD = "zero_pad"
    GROUP_SORT = "group_sort"
    MLP_SIN = "mlp_sin"
    GCN_DECODER = "gcn_decoder"
    LINEAR = "linear"
    IDENTITY = "identity"


class Activation(str, Enum):
    IDENTITY = "identity"
    RELU = "relu"
    SIN = "sin"


class OperatorSource(str, Enum):
    # Ã = D^{-1/2} A D^{-1/2}
    GRAPH_NORMALIZED = "graph_normalized"
    # D̂^{-1/2} (A + I) D̂^{-1/2}, the self-loop renormalization of GCN baselines
    GRAPH_GCN = "graph_gcn"
    # D^{-1/2} (W ⊙ A) D^{-1/2} with cotangent weights
    MESH_WEIGHTED = "mesh_weighted"


class MeshOrigin(str, Enum):
    EMBEDDED = "embedded"
    REWIRED = "rewired"


class VarianceStatistic(str, Enum):
    # Var(‖f‖) over each orbit
    NORM = "norm"
    # E‖f − E f‖² over each orbit
    VECTOR = "vector"


class KlEstimator(str, Enum):
    # 等宽直方图，+1 平滑 | uniform histogram with +1 smoothing
    HISTOGRAM = "histogram"
    # 高斯核密度，带宽取自 P | Gaussian kernel density, bandwidth taken from P
    KDE = "kde"
