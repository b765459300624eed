# filename: datasets.py
# @Time    : 2025/11/17 14:10
# @Software: PyCharm
"""
数据集生成器 | Dataset generators

- 网格热扩散：每个样本独立派生种子，结果与线程数无关 | grid heat: per-sample seeds, independent of thread count
- 网格 PDE：每个网格若干个高斯凸包初始条件 | mesh PDEs: a few Gaussian-bump initial conditions per mesh
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from relaxuni.dynamics.heat_graph import get_grid_propagator
from relaxuni.dynamics.mesh_pde import simulate_cahn_hilliard, simulate_heat_mesh, simulate_wave_mesh
from relaxuni.dynamics.params import PdeParams
from relaxuni.dynamics.trajectory import Trajectory, read_trajectory
from relaxuni.exceptions import ArgumentError, FormatError
from relaxuni.graph.graph import Graph, grid_graph
from relaxuni.mesh.io import load_mesh, save_mesh
from relaxuni.mesh.operators import MeshOperators, mesh_operators
from relaxuni.mesh.trimesh import TriMesh
from relaxuni.schema import LaplacianKind, PdeKind
from relaxuni.utils import read_json, seed_stream, write_json

__all__ = [
    "DatasetManifest",
    "GridHeatConfig",
    "HeatSample",
    "ManifestEntry",
    "MeshDatasetConfig",
    "gen_heat_grid_dataset",
    "gen_mesh_dataset",
    "load_heat_grid_dataset",
    "load_manifest",
    "random_bump_field",
    "save_heat_grid_dataset",
]

MANIFEST_NAME = "manifest.json"


class GridHeatConfig(BaseModel):
    """
    网格热扩散数据集配置 | Grid heat dataset configuration

    Grid side lengths are drawn from N(side_mean, side_std²), rounded and clamped to >= min_side.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    count: int = Field(default=10000, ge=1)
    sources: int = Field(default=20, ge=1)
    side_mean: float = Field(default=10.0, gt=0)
    side_std: float = Field(default=2.0, ge=0)
    min_side: int = Field(default=5, ge=1)
    tau: float = Field(default=0.2, gt=0)
    t_end: float = Field(default=10.0, gt=0)
    dt: float = Field(default=0.5, gt=0)
    input_time: float = Field(default=3.0, ge=0)
    target_time: float = Field(default=4.0, ge=0)
    laplacian: LaplacianKind = LaplacianKind.NORMALIZED
    keep_trajectory: bool = False

    def sample_times(self) -> npt.NDArray[np.float64]:
        return np.round(np.arange(0.0, self.t_end + 0.5 * self.dt, self.dt), 12)


@dataclass
class HeatSample:
    rows: int
    cols: int
    input: npt.NDArray[np.float64]
    target: npt.NDArray[np.float64]
    trajectory: Trajectory | None = None

    @property
    def graph(self) -> Graph:
        return grid_graph(self.rows, self.cols)


def _draw_side(rng: np.random.Generator, cfg: GridHeatConfig) -> int:
    return max(cfg.min_side, int(round(rng.normal(cfg.side_mean, cfg.side_std))))


def _heat_sample(cfg: GridHeatConfig, seed: int, index: int) -> HeatSample:
    rng = seed_stream(seed, "heat_grid", index)
    rows, cols = _draw_side(rng, cfg), _draw_side(rng, cfg)
    n = rows * cols
    if cfg.sources > n:
        raise ArgumentError(f"sources={cfg.sources} exceeds grid size {n}", sources=cfg.sources, n=n)
    h0 = np.zeros((n, 1))
    h0[rng.choice(n, size=cfg.sources, replace=False), 0] = 1.0
    times = cfg.sample_times()
    frames = get_grid_propagator(rows, cols, cfg.laplacian).propagate(h0, cfg.tau, times)
    frames[0] = h0
    traj = Trajectory(times=times, frames=frames, source_id=f"grid:{rows}x{cols}", metadata={"sample": index})
    return HeatSample(
        rows=rows,
        cols=cols,
        input=traj.at_time(cfg.input_time).copy(),
        target=traj.at_time(cfg.target_time).copy(),
        trajectory=traj if cfg.keep_trajectory else None,
    )


def gen_heat_grid_dataset(cfg: GridHeatConfig, seed: int, threads: int | None = None) -> list[HeatSample]:
    """
    生成 (t=3, t=4) 热扩散样本对 | Generate (t=3, t=4) heat diffusion pairs

    Args:
        cfg: Dataset configuration
        seed: Top-level seed; sample i uses the sub-stream (seed, "heat_grid", i)
        threads: Worker threads (default: CPU count)

    Raises:
        ArgumentError: If a drawn grid is too small for the requested number of sources
    """
    if cfg.sources > cfg.min_side**2:
        raise ArgumentError(f"sources={cfg.sources} may exceed the smallest grid ({cfg.min_side}x{cfg.min_side})", sources=cfg.sources)
    workers = max(1, threads or os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        samples = list(pool.map(lambda i: _heat_sample(cfg, seed, i), range(cfg.count)))
    logger.info(f"heat grid dataset generated count={cfg.count} seed={seed} threads={workers}")
    return samples


# —— manifest —— #


class ManifestEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    trajectory: str
    rows: int | None = None
    cols: int | None = None
    mesh: str | None = None
    pairs: list[tuple[float, float]] = Field(default_factory=list)


class DatasetManifest(BaseModel):
    """
    数据集清单：列出轨迹文件与 (输入时间, 目标时间) 对 | Lists trajectory files and (input_time, target_time) pairs
    """

    model_config = ConfigDict(extra="forbid")

    kind: str
    seed: int
    config: dict[str, Any] = Field(default_factory=dict)
    entries: list[ManifestEntry] = Field(default_factory=list)


def save_heat_grid_dataset(samples: list[HeatSample], cfg: GridHeatConfig, seed: int, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    entries = []
    for i, s in enumerate(samples):
        name = f"sample_{i:05d}.traj"
        traj = s.trajectory or Trajectory(times=[cfg.input_time, cfg.target_time], frames=np.stack([s.input, s.target]))
        traj.source_id = f"grid:{s.rows}x{s.cols}"
        traj.save(out / "trajectories" / name)
        entries.append(ManifestEntry(id=f"sample_{i:05d}", trajectory=f"trajectories/{name}", rows=s.rows, cols=s.cols, pairs=[(cfg.input_time, cfg.target_time)]))
    manifest = DatasetManifest(kind="heat_grid", seed=seed, config=cfg.model_dump(mode="json"), entries=entries)
    return write_json(out / MANIFEST_NAME, manifest.model_dump(mode="json"))


def load_manifest(data_dir: str | Path) -> DatasetManifest:
    payload = read_json(Path(data_dir) / MANIFEST_NAME)
    try:
        return DatasetManifest.model_validate(payload)
    except Exception as e:
        raise FormatError(f"invalid manifest in {data_dir}", detail=str(e)) from e


def load_heat_grid_dataset(data_dir: str | Path) -> list[HeatSample]:
    data_dir = Path(data_dir)
    manifest = load_manifest(data_dir)
    if manifest.kind != "heat_grid":
        raise FormatError(f"expected a heat_grid dataset, got {manifest.kind}", kind=manifest.kind)
    samples = []
    for entry in manifest.entries:
        traj = read_trajectory(data_dir / entry.trajectory)
        t_in, t_out = entry.pairs[0]
        samples.append(HeatSample(rows=int(entry.rows or 0), cols=int(entry.cols or 0), input=traj.at_time(t_in), target=traj.at_time(t_out)))
    return samples


# —— mesh datasets —— #


class MeshDatasetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    pde: PdeParams = Field(default_factory=PdeParams)
    inits: int = Field(default=5, ge=1)
    bumps: int = Field(default=3, ge=1)
    bump_width: float = Field(default=0.3, gt=0)
    rewire: bool = True


def random_bump_field(positions: npt.NDArray[np.float64], rng: np.random.Generator, bumps: int, width: float) -> npt.NDArray[np.float64]:
    """
    若干个以随机顶点为中心的高斯凸包之和，归一化到 [0, 1]。
    Sum of Gaussian bumps centred on random vertices, rescaled to [0, 1].
    """
    centres = positions[rng.choice(len(positions), size=min(bumps, len(positions)), replace=False)]
    heights = rng.uniform(0.5, 1.0, size=len(centres))
    dist2 = np.sum((positions[:, None, :] - centres[None, :, :]) ** 2, axis=-1)
    field_ = np.sum(heights[None, :] * np.exp(-dist2 / (2.0 * width * width)), axis=1)
    span = field_.max() - field_.min()
    return ((field_ - field_.min()) / span if span > 0 else np.zeros_like(field_))[:, None]


@dataclass
class MeshSample:
    mesh: TriMesh
    ops: MeshOperators
    trajectory: Trajectory
    init_index: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


def _simulate(ops: MeshOperators, u0: npt.NDArray[np.float64], p: PdeParams) -> Trajectory:
    if p.kind == PdeKind.HEAT_MESH:
        return simulate_heat_mesh(ops, u0, p.alpha, p.step_size, p.steps)
    if p.kind == PdeKind.WAVE_MESH:
        return simulate_wave_mesh(ops, u0, np.zeros_like(u0), p.c, p.step_size, p.steps)
    if p.kind == PdeKind.CAHN_HILLIARD:
        # 浓度场置于 [0.45, 0.55] 附近 | concentration near the [0.45, 0.55] band
        return simulate_cahn_hilliard(ops, 0.45 + 0.1 * u0, p.mobility, p.lam, p.step_size, p.steps)
    raise ArgumentError(f"{p.kind.value} is not a mesh PDE", kind=p.kind.value)


def gen_mesh_dataset(meshes: list[TriMesh], cfg: MeshDatasetConfig, seed: int) -> list[MeshSample]:
    """
    每个网格 `inits` 个初始条件 | `inits` initial conditions per mesh
    """
    samples = []
    for m_idx, mesh in enumerate(meshes):
        ops = mesh_operators(mesh, rewire=cfg.rewire)
        for k in range(cfg.inits):
            rng = seed_stream(seed, "mesh", m_idx, k)
            u0 = random_bump_field(mesh.positions, rng, cfg.bumps, cfg.bump_width)
            traj = _simulate(ops, u0, cfg.pde)
            traj.source_id = mesh.name
            samples.append(MeshSample(mesh=mesh, ops=ops, trajectory=traj, init_index=k))
        logger.info(f"mesh dataset mesh={mesh.name} pde={cfg.pde.kind.value} inits={cfg.inits}")
    return samples


def save_mesh_dataset(samples: list[MeshSample], cfg: MeshDatasetConfig, seed: int, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    entries = []
    saved_meshes: dict[str, str] = {}
    for i, s in enumerate(samples):
        mesh_file = saved_meshes.get(s.mesh.name)
        if mesh_file is None:
            mesh_file = f"meshes/{s.mesh.name}.off"
            save_mesh(s.mesh, out / mesh_file)
            saved_meshes[s.mesh.name] = mesh_file
        name = f"{s.mesh.name}_{s.init_index}.traj"
        s.trajectory.save(out / "trajectories" / name)
        times = s.trajectory.times
        entries.append(
            ManifestEntry(
                id=f"{s.mesh.name}_{s.init_index}",
                trajectory=f"trajectories/{name}",
                mesh=mesh_file,
                pairs=[(float(times[k]), float(times[k + 1])) for k in range(len(times) - 1)],
            )
        )
    manifest = DatasetManifest(kind=f"mesh_{cfg.pde.kind.value}", seed=seed, config=cfg.model_dump(mode="json"), entries=entries)
    return write_json(out / MANIFEST_NAME, manifest.model_dump(mode="json"))


def load_mesh_dataset(data_dir: str | Path, rewire: bool = True) -> list[MeshSample]:
    data_dir = Path(data_dir)
    manifest = load_manifest(data_dir)
    if not manifest.kind.startswith("mesh_"):
        raise FormatError(f"expected a mesh dataset, got {manifest.kind}", kind=manifest.kind)
    ops_cache: dict[str, tuple[TriMesh, MeshOperators]] = {}
    samples = []
    for entry in manifest.entries:
        if entry.mesh is None:
            raise FormatError(f"entry {entry.id} has no mesh", entry=entry.id)
        if entry.mesh not in ops_cache:
            mesh = load_mesh(data_dir / entry.mesh)
            ops_cache[entry.mesh] = (mesh, mesh_operators(mesh, rewire=rewire))
        mesh, ops = ops_cache[entry.mesh]
        samples.append(MeshSample(mesh=mesh, ops=ops, trajectory=read_trajectory(data_dir / entry.trajectory)))
    return samples
