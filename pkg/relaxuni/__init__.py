"""
RelaxUni - smoothness-controlled dynamics modeling on graphs and triangle meshes.

This package provides:
- Rayleigh-quotient diagnostics on graphs and cotangent-weighted meshes
- Unitary and Taylor-relaxed convolution layers trained by a built-in reverse-mode tape
- Heat, wave and Cahn-Hilliard simulators for ground-truth trajectories
- A Monte-Carlo check of the unitary approximation-error lower bound

Main Components:
- relaxuni.autodiff: Tape, Param, gradient check
- relaxuni.layers: layer specs, models, checkpoints
- relaxuni.train: training loop, rollout, sensitivity sweep
- relaxuni.metrics: MRE, RE, NRMSE, SMAPE, KL, two-point correlation, weather scores
- relaxuni.cli: the `relaxuni` command
"""

from relaxuni.exceptions import RelaxUniError

__version__ = "0.1.0rc0"

__all__ = [
    "RelaxUniError",
    "__version__",
]
