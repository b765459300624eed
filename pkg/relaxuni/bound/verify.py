# filename: verify.py
# @Time    : 2025/11/21 14:20
# @Software: PyCharm
"""
下界验证：拟合一个酉映射并比较其经验误差与下界 | Bound verification against a fitted unitary map
"""

from collections.abc import Callable
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger

from relaxuni.autodiff.tape import Param, Tape
from relaxuni.bound.estimate import DEFAULT_ORBIT_SAMPLES, BoundEstimate, estimate_bound
from relaxuni.bound.sampler import OrbitSampler, evaluate_target, sample_domain
from relaxuni.exceptions import ArgumentError
from relaxuni.layers.conv import unitary_node
from relaxuni.linalg.unitary import unitary_from_free
from relaxuni.train.optim import AdamState, adam_step
from relaxuni.utils import seed_stream, write_json

__all__ = [
    "DEFAULT_DOMAIN_SAMPLES",
    "BoundReport",
    "UnitaryMap",
    "fit_unitary_map",
    "verify_bound",
    "write_bound_report",
]

DEFAULT_DOMAIN_SAMPLES = 1_000_000


@dataclass(frozen=True)
class UnitaryMap:
    """z ↦ U·z，U 为常酉矩阵 | z ↦ U·z with a constant unitary U"""

    matrix: npt.NDArray[np.float64]

    def __call__(self, points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return points @ self.matrix.T


def fit_unitary_map(
    sampler: OrbitSampler,
    steps: int = 200,
    lr: float = 0.05,
    batch_size: int = 2048,
) -> UnitaryMap:
    """
    用 Adam 优化单个自由矩阵 S，U = exp(S − Sᵀ)，最小化 E‖Uz − f(z)‖²
    Fit U = exp(S − Sᵀ) through a single free matrix S with Adam, minimizing E‖Uz − f(z)‖²

    Raises:
        ArgumentError: If f does not map the space to itself, or steps < 1
    """
    if steps < 1:
        raise ArgumentError(f"steps must be >= 1, got {steps}", steps=steps)
    d = sampler.dimension
    s = Param("skew", 0.1 * seed_stream(sampler.seed, "fit", "init").standard_normal((d, d)))
    state = AdamState()
    loss_value = float("nan")
    for step in range(steps):
        points = sample_domain(sampler, seed_stream(sampler.seed, "fit", step), batch_size)
        targets = evaluate_target(sampler.target, points)
        if targets.shape[1] != d:
            raise ArgumentError(f"target maps into dimension {targets.shape[1]}, expected {d}")
        tape = Tape()
        u = unitary_node(tape, tape.param(s))
        pred = tape.matmul(tape.constant(points), tape.transpose_conj(u))
        loss = tape.mse(pred, tape.constant(targets))
        s.zero_grad()
        tape.backward(loss)
        adam_step([s], None, state, lr)
        loss_value = float(np.real(tape.value(loss)[0, 0])) * d
    logger.info(f"unitary map fitted steps={steps} final_error={loss_value:.6f}")
    return UnitaryMap(matrix=np.real(unitary_from_free(s.value)))


@dataclass(frozen=True)
class BoundReport:
    """
    Attributes:
        empirical_error: Monte-Carlo ∫ p‖u(z) − f(z)‖²
        empirical_stderr: Standard error of empirical_error
        bound: Lower-bound estimate
        bound_stderr: Standard error of the bound over repeats
        mc_stderr: Combined standard error sqrt(empirical_stderr² + bound_stderr²)
        satisfied: empirical_error >= bound − 3·mc_stderr
        statistic: Orbit variance statistic used for the bound
    """

    empirical_error: float
    empirical_stderr: float
    bound: float
    bound_stderr: float
    mc_stderr: float
    satisfied: bool
    statistic: str

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def verify_bound(
    sampler: OrbitSampler,
    unitary_map: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    n_samples: int = DEFAULT_DOMAIN_SAMPLES,
    radius_grid: npt.ArrayLike | None = None,
    orbit_samples: int = DEFAULT_ORBIT_SAMPLES,
    repeats: int = 4,
    threads: int | None = None,
    bound: BoundEstimate | None = None,
) -> BoundReport:
    """
    比较酉映射的经验误差与下界 | Compare a unitary map's empirical error with the lower bound

    Args:
        sampler: Orbit sampler holding f and p
        unitary_map: Any z ↦ U(z)·z with U(z) unitary
        n_samples: Domain samples for the empirical error
        radius_grid: Radius grid of the bound (default: 200 points)
        orbit_samples: Sphere samples per radius
        repeats: Independent bound repetitions for its standard error
        threads: Worker threads for the bound
        bound: Reuse a bound computed earlier instead of estimating it again
    """
    if n_samples < 2:
        raise ArgumentError(f"n_samples must be >= 2, got {n_samples}", n_samples=n_samples)
    points = sample_domain(sampler, seed_stream(sampler.seed, "verify"), n_samples)
    targets = evaluate_target(sampler.target, points)
    mapped = np.asarray(unitary_map(points), dtype=np.float64)
    if mapped.shape != targets.shape:
        raise ArgumentError(f"unitary map returned {mapped.shape}, expected {targets.shape}")
    sq = np.sum((mapped - targets) ** 2, axis=1)
    error = float(np.mean(sq))
    error_se = float(np.std(sq, ddof=1) / np.sqrt(n_samples))

    if bound is None:
        bound = estimate_bound(sampler, radius_grid, orbit_samples, repeats, threads)
    combined = float(np.hypot(error_se, bound.stderr))
    report = BoundReport(
        empirical_error=error,
        empirical_stderr=error_se,
        bound=bound.value,
        bound_stderr=bound.stderr,
        mc_stderr=combined,
        satisfied=bool(error >= bound.value - 3.0 * combined),
        statistic=sampler.statistic.value,
    )
    logger.info(f"bound verified error={error:.6f} bound={bound.value:.6f} mc_stderr={combined:.2e} satisfied={report.satisfied}")
    return report


def write_bound_report(report: BoundReport, path: str | Path) -> Path:
    return write_json(path, report.to_dict())
