"""
反向模式自动微分（复数与实数）| Reverse-mode autodiff over real and complex matrices
"""

from relaxuni.autodiff.gradcheck import DEFAULT_EPSILON, DEFAULT_TOLERANCE, grad_check
from relaxuni.autodiff.ops import GROUP_SIZE, OPS, OpDef
from relaxuni.autodiff.tape import Node, NodeId, Param, Tape

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_TOLERANCE",
    "GROUP_SIZE",
    "Node",
    "NodeId",
    "OPS",
    "OpDef",
    "Param",
    "Tape",
    "grad_check",
]
