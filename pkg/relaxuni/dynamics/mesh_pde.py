# filename: mesh_pde.py
# @Time    : 2025/11/17 11:30
# @Software: PyCharm
"""
网格上的热方程、波动方程与 Cahn–Hilliard 方程 | Heat, wave and Cahn–Hilliard equations on meshes

L_mesh 为面积归一化余切拉普拉斯（谱非正），稀疏分解每次运行只做一次。
L_mesh is the area-normalized cotangent Laplacian (nonpositive spectrum); each run factorizes once.
"""

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy import sparse
from scipy.sparse import linalg as splinalg

from relaxuni.dynamics.trajectory import Trajectory
from relaxuni.exceptions import ArgumentError, DimensionError, NumericalError, StabilityError
from relaxuni.linalg.dense import gershgorin_bound
from relaxuni.mesh.operators import MeshOperators, cotangent_laplacian

__all__ = [
    "ch_potential_derivative",
    "leapfrog",
    "simulate_cahn_hilliard",
    "simulate_heat_mesh",
    "simulate_wave_mesh",
    "wave_energy",
    "wave_max_dt",
]


def _field(ops: MeshOperators, u: npt.ArrayLike, name: str) -> npt.NDArray[np.float64]:
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] != ops.n:
        raise DimensionError(f"{name} must have {ops.n} rows, got {arr.shape}", shape=arr.shape)
    return arr.copy()


def _check_step(dt: float, steps: int) -> None:
    if dt <= 0:
        raise ArgumentError(f"dt must be > 0, got {dt}", dt=dt)
    if steps < 1:
        raise ArgumentError(f"steps must be >= 1, got {steps}", steps=steps)


def _factorize(matrix: sparse.spmatrix, label: str):  # type: ignore[no-untyped-def]
    try:
        return splinalg.factorized(sparse.csc_matrix(matrix))
    except RuntimeError as e:
        raise NumericalError(f"{label}: singular system matrix", detail=str(e), solver=label) from e


def _solve_columns(solve, rhs: npt.NDArray[np.float64], label: str) -> npt.NDArray[np.float64]:  # type: ignore[no-untyped-def]
    out = np.column_stack([solve(rhs[:, j]) for j in range(rhs.shape[1])])
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"{label}: non-finite solution", solver=label)
    return out


def simulate_heat_mesh(ops: MeshOperators, u0: npt.ArrayLike, alpha: float, dt: float, steps: int) -> Trajectory:
    """
    隐式 Euler：(I − α·dt·L_mesh) u_{k+1} = u_k | Implicit Euler

    The system is solved in its symmetric form (M − α·dt·W) u_{k+1} = M u_k with M = diag(A_i), so the
    area-weighted mass Σ A_i u_i is conserved.

    Returns:
        Trajectory: steps + 1 frames at times 0, dt, ..., steps·dt

    Raises:
        NumericalError: If the system matrix is singular
    """
    _check_step(dt, steps)
    if alpha <= 0:
        raise ArgumentError(f"alpha must be > 0, got {alpha}", alpha=alpha)
    u = _field(ops, u0, "u0")
    mass = sparse.diags(ops.areas)
    w = ops.cot_weights.to_scipy(with_diagonal=True)
    solve = _factorize(mass - alpha * dt * w, "heat_mesh")
    frames = [u]
    for _ in range(steps):
        u = _solve_columns(solve, ops.areas[:, None] * u, "heat_mesh")
        frames.append(u)
    logger.debug(f"heat_mesh done n={ops.n} steps={steps} dt={dt}")
    return Trajectory(times=dt * np.arange(steps + 1), frames=np.stack(frames), source_id=ops.mesh.name, metadata={"pde": "heat_mesh", "alpha": alpha, "dt": dt})


def wave_max_dt(ops: MeshOperators, c: float) -> float:
    """
    显式跳蛙的 CFL 上界 2/(c·√ρ)，ρ 用 Gershgorin 圆估计。
    CFL limit 2/(c·√ρ) of the explicit leapfrog, with ρ bounded by Gershgorin discs.
    """
    rho = gershgorin_bound(cotangent_laplacian(ops))
    return float(2.0 / (c * np.sqrt(rho))) if rho > 0 else float("inf")


def leapfrog(
    lap: sparse.spmatrix, u: npt.NDArray[np.float64], v: npt.NDArray[np.float64], c: float, dt: float, steps: int
) -> tuple[list[npt.NDArray[np.float64]], list[npt.NDArray[np.float64]]]:
    """
    Störmer–Verlet（kick-drift-kick），可逆且辛 | Störmer–Verlet (kick-drift-kick), reversible and symplectic

    Returns:
        (us, vs): Positions and velocities at every integer step, including the start
    """
    c2 = c * c
    us, vs = [u.copy()], [v.copy()]
    acc = c2 * (lap @ u)
    for _ in range(steps):
        v_half = v + 0.5 * dt * acc
        u = u + dt * v_half
        acc = c2 * (lap @ u)
        v = v_half + 0.5 * dt * acc
        us.append(u)
        vs.append(v)
    return us, vs


def simulate_wave_mesh(ops: MeshOperators, u0: npt.ArrayLike, v0: npt.ArrayLike, c: float, dt: float, steps: int) -> Trajectory:
    """
    ∂²u/∂t² = c² L_mesh u，跳蛙格式 | leapfrog scheme

    Raises:
        StabilityError: If dt exceeds the CFL limit; context["max_dt"] is the admissible step
    """
    _check_step(dt, steps)
    if c <= 0:
        raise ArgumentError(f"c must be > 0, got {c}", c=c)
    max_dt = wave_max_dt(ops, c)
    if dt >= max_dt:
        raise StabilityError(f"dt={dt} violates the CFL limit", max_dt=max_dt, dt=dt)
    u = _field(ops, u0, "u0")
    v = _field(ops, v0, "v0")
    if u.shape != v.shape:
        raise DimensionError(f"u0 {u.shape} and v0 {v.shape} differ", shapes=[u.shape, v.shape])
    us, vs = leapfrog(cotangent_laplacian(ops), u, v, c, dt, steps)
    if not np.all(np.isfinite(us[-1])):
        raise NumericalError("wave_mesh: non-finite state", solver="wave_mesh")
    return Trajectory(
        times=dt * np.arange(steps + 1),
        frames=np.stack(us),
        source_id=ops.mesh.name,
        metadata={"pde": "wave_mesh", "c": c, "dt": dt},
        velocities=np.stack(vs),
    )


def wave_energy(ops: MeshOperators, u: npt.ArrayLike, v: npt.ArrayLike, c: float) -> float:
    """
    E = ½ vᵀ M v + ½ c² uᵀ(−W)u，M = diag(A_i) | discrete wave energy
    """
    u_arr = _field(ops, u, "u")
    v_arr = _field(ops, v, "v")
    w = ops.cot_weights.to_scipy(with_diagonal=True)
    kinetic = 0.5 * float(np.sum(ops.areas[:, None] * v_arr * v_arr))
    potential = -0.5 * c * c * float(np.sum(u_arr * (w @ u_arr)))
    return kinetic + potential


def ch_potential_derivative(c: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """
    双势阱 f(c) = 100c²(1 − c)² 的导数，势阱位于 c = 0 与 c = 1。
    Derivative 200c(1 − c)(1 − 2c) of the double well f(c) = 100c²(1 − c)², with wells at c = 0 and c = 1.
    """
    return 200.0 * c * (1.0 - c) * (1.0 - 2.0 * c)


def simulate_cahn_hilliard(ops: MeshOperators, c0: npt.ArrayLike, mobility: float, lam: float, dt: float, steps: int) -> Trajectory:
    """
    半隐式：(I + dt·M·λ·L²) c_{k+1} = c_k + dt·M·L f′(c_k)
    Semi-implicit: the linear fourth-order part is implicit, the potential term explicit. The explicit term
    limits the step; dt = 1e-4 (`CH_DEFAULT_DT`) keeps a concentration near 0.5 bounded on a level-2 icosphere.

    Raises:
        NumericalError: On a singular system or non-finite state
    """
    _check_step(dt, steps)
    if mobility <= 0 or lam <= 0:
        raise ArgumentError("mobility and lam must be > 0", mobility=mobility, lam=lam)
    c = _field(ops, c0, "c0")
    lap = cotangent_laplacian(ops)
    eye = sparse.identity(ops.n, format="csr")
    solve = _factorize(eye + dt * mobility * lam * (lap @ lap), "cahn_hilliard")
    frames = [c]
    for step in range(steps):
        rhs = c + dt * mobility * (lap @ ch_potential_derivative(c))
        try:
            c = _solve_columns(solve, rhs, "cahn_hilliard")
        except NumericalError as e:
            raise NumericalError(e.message, solver="cahn_hilliard", step=step) from e
        frames.append(c)
    return Trajectory(
        times=dt * np.arange(steps + 1),
        frames=np.stack(frames),
        source_id=ops.mesh.name,
        metadata={"pde": "cahn_hilliard", "mobility": mobility, "lam": lam, "dt": dt},
    )
