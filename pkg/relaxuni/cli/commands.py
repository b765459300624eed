# filename: commands.py
# @Time    : 2025/11/22 10:20
# @Software: PyCharm
"""
子命令实现 | Sub-command implementations

每个命令把输出写进 --out 目录，并附上 resolved_config.json 与 resolved_args.json，返回一个结果摘要字典。
Every command writes into its --out directory together with resolved_config.json and resolved_args.json,
and returns a summary dict.
"""

import math
import re
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.spatial.distance import pdist
from simple_parsing.helpers import FrozenSerializable

from relaxuni.bound import default_radius_grid, estimate_bound, fit_unitary_map, unit_disk_sampler, verify_bound, write_bound_report
from relaxuni.cli.args import (
    BoundArguments,
    EvalArguments,
    GenDataArguments,
    GlobalArguments,
    MeshPrepArguments,
    RolloutArguments,
    SensitivityArguments,
    TrainArguments,
)
from relaxuni.cli.config import BoundRunConfig, GenDataConfig, SensitivityConfig, TrainRunConfig, build_mesh, load_config
from relaxuni.dynamics.datasets import (
    gen_heat_grid_dataset,
    gen_mesh_dataset,
    load_heat_grid_dataset,
    load_manifest,
    load_mesh_dataset,
    save_heat_grid_dataset,
    save_mesh_dataset,
)
from relaxuni.dynamics.trajectory import Trajectory, read_trajectory
from relaxuni.exceptions import ArgumentError, ContractError, MissingInputError
from relaxuni.graph.graph import Graph, grid_graph
from relaxuni.layers.checkpoint import load_checkpoint, save_checkpoint
from relaxuni.layers.model import build_model
from relaxuni.mesh.io import load_mesh
from relaxuni.mesh.operators import MeshOperators, mesh_operators
from relaxuni.mesh.trimesh import check_manifold
from relaxuni.metrics import MetricRow, err_smooth, mre, nrmse, rayleigh_error, smape, write_metric_rows, write_metric_summary
from relaxuni.train.loop import TrainHistory, ensemble, heat_examples, lr_sweep, mesh_examples, train
from relaxuni.train.rollout import rollout
from relaxuni.train.sensitivity import rq_sensitivity, summarize_sensitivity, write_sensitivity_csv
from relaxuni.utils import read_json, write_json

__all__ = [
    "EVAL_METRICS",
    "resolve_source",
    "run_bound",
    "run_eval",
    "run_gen_data",
    "run_mesh_prep",
    "run_rollout",
    "run_sensitivity",
    "run_train",
]

EVAL_METRICS = ("nrmse", "smape", "re", "mre", "err_smooth")
RESOLVED_CONFIG = "resolved_config.json"
RESOLVED_ARGS = "resolved_args.json"
ERR_SMOOTH_BINS = 10
_GRID_SOURCE = re.compile(r"^grid:(\d+)x(\d+)$")


def _prepare_out(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_resolved(out: Path, config: dict[str, Any], args: FrozenSerializable, common: GlobalArguments) -> None:
    write_json(out / RESOLVED_CONFIG, config)
    write_json(out / RESOLVED_ARGS, {"args": args.to_dict(), "global": common.to_dict()})


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


# —— operator sources —— #


def resolve_source(traj: Trajectory, traj_path: Path, rewire: bool = True) -> Graph | MeshOperators:
    """
    由轨迹的 source_id 找回图或网格 | Recover the graph or mesh a trajectory lives on from its source_id

    "grid:RxC" 为网格图；否则在轨迹旁和数据集的 meshes/ 目录下查找同名 OFF / OBJ 文件。
    "grid:RxC" names a grid graph; anything else is looked up as an OFF / OBJ file next to the
    trajectory or in the dataset's meshes/ directory.

    Raises:
        MissingInputError: If no mesh file matches the source_id
    """
    match = _GRID_SOURCE.match(traj.source_id)
    if match:
        return grid_graph(int(match.group(1)), int(match.group(2)))
    return mesh_operators(load_mesh(_mesh_file(traj.source_id, traj_path)), rewire=rewire)


def _mesh_file(source_id: str, traj_path: Path) -> Path:
    for folder in (traj_path.parent, traj_path.parent.parent / "meshes", traj_path.parent / "meshes"):
        for suffix in (".off", ".obj"):
            candidate = folder / f"{source_id}{suffix}"
            if candidate.exists():
                return candidate
    raise MissingInputError(f"cannot find the mesh for source_id={source_id!r} near {traj_path}", source_id=source_id, path=str(traj_path))


def _positions(source_id: str, traj_path: Path) -> npt.NDArray[np.float64]:
    """err_smooth 所需的顶点坐标；网格图取 (行, 列) | Vertex positions for err_smooth; (row, col) on grid graphs"""
    match = _GRID_SOURCE.match(source_id)
    if match:
        rows, cols = int(match.group(1)), int(match.group(2))
        r, c = np.divmod(np.arange(rows * cols), cols)
        return np.stack([r, c], axis=1).astype(np.float64)
    return load_mesh(_mesh_file(source_id, traj_path)).positions


# —— gen-data —— #


def run_gen_data(args: GenDataArguments, common: GlobalArguments) -> dict[str, Any]:
    cfg = load_config(GenDataConfig, args.config)
    out = _prepare_out(args.out)
    if cfg.kind == "heat_grid":
        heat = gen_heat_grid_dataset(cfg.heat, cfg.seed, common.threads)
        manifest = save_heat_grid_dataset(heat, cfg.heat, cfg.seed, out)
        count = len(heat)
    else:
        base = Path(args.config).parent
        meshes = [build_mesh(entry, cfg.seed, i, base_dir=base) for i, entry in enumerate(cfg.meshes)]
        samples = gen_mesh_dataset(meshes, cfg.mesh, cfg.seed)
        manifest = save_mesh_dataset(samples, cfg.mesh, cfg.seed, out)
        count = len(samples)
    _write_resolved(out, cfg.model_dump(mode="json"), args, common)
    return {"command": "gen-data", "kind": cfg.kind, "samples": count, "manifest": str(manifest)}


# —— train —— #


def _write_history(history: TrainHistory, path: Path) -> dict[str, Any]:
    history.write_csv(path)
    return {
        "final_train_mse": _finite_or_none(history.final_train_mse),
        "final_val_mse": _finite_or_none(history.final_val_mse),
        "diverged": history.diverged,
        "diverged_at": history.diverged_at,
    }


def run_train(args: TrainArguments, common: GlobalArguments) -> dict[str, Any]:
    cfg = load_config(TrainRunConfig, args.config)
    spec = cfg.model_spec()
    out = _prepare_out(args.out)
    manifest = load_manifest(args.data)
    model = build_model(spec)
    if manifest.kind == "heat_grid":
        heat = load_heat_grid_dataset(args.data)
        examples = heat_examples(heat[: cfg.max_examples], model)
    else:
        samples = load_mesh_dataset(args.data, rewire=cfg.rewire)
        examples = mesh_examples(samples[: cfg.max_examples], model)
    logger.info(f"开始训练 | training started model={spec.name} examples={len(examples)} params={model.parameter_count}")

    extra: dict[str, Any] = {"dataset_kind": manifest.kind, "rewire": cfg.rewire}
    if cfg.sweep_lr:
        sweep = lr_sweep(spec, examples, cfg.train, cfg.lr_grid)
        for lr, h in sweep.histories.items():
            h.write_csv(out / f"history_lr{lr:g}.csv")
        model, history = sweep.models[sweep.best_lr], sweep.histories[sweep.best_lr]
        extra["lr"] = sweep.best_lr
    else:
        history = train(model, examples, cfg.train)
        extra["lr"] = cfg.train.lr
    extra.update(_write_history(history, out / "history.csv"))
    checkpoint = save_checkpoint(model, out / "model.json", extra=extra)

    runs = []
    for seed, m, h in ensemble(spec, examples, cfg.train, cfg.seeds):
        summary = _write_history(h, out / f"history_seed{seed}.csv")
        save_checkpoint(m, out / f"model_seed{seed}.json", extra={**extra, **summary, "seed": seed})
        runs.append({"seed": seed, **summary})
    _write_resolved(out, cfg.model_dump(mode="json"), args, common)
    return {"command": "train", "checkpoint": str(checkpoint), **extra, "ensemble": runs}


# —— rollout —— #


def run_rollout(args: RolloutArguments, common: GlobalArguments) -> dict[str, Any]:
    model = load_checkpoint(args.checkpoint)
    extra = read_json(args.checkpoint).get("extra", {})
    init_path = Path(args.init)
    init = read_trajectory(init_path)
    window = model.spec.input_window
    if len(init) < window:
        raise ContractError(f"{init_path} holds {len(init)} frames, the model needs {window}", frames=len(init), input_window=window)
    out = _prepare_out(args.out)
    source = resolve_source(init, init_path, rewire=bool(extra.get("rewire", True)))
    dt = float(init.times[1] - init.times[0]) if len(init) > 1 else 1.0
    t0 = float(init.times[window - 1])
    pred = rollout(model, model.operator(source), init.frames[:window], args.steps, dt=dt, t0=t0, source_id=init.source_id)
    path = pred.save(out / "prediction.traj")
    _write_resolved(out, {"command": "rollout", "model": model.spec.model_dump(mode="json"), "checkpoint_extra": extra}, args, common)
    return {"command": "rollout", "trajectory": str(path), "frames": len(pred), "truncated": pred.metadata.get("truncated", False)}


# —— eval —— #


def _pairs(pred: Path, truth: Path) -> list[tuple[Path, Path]]:
    if not pred.exists():
        raise MissingInputError(f"File not found: {pred}", path=str(pred))
    if not truth.exists():
        raise MissingInputError(f"File not found: {truth}", path=str(truth))
    if pred.is_file():
        return [(pred, truth if truth.is_file() else truth / pred.name)]
    pairs = []
    for p in sorted(pred.glob("*.traj")):
        t = truth / p.name if truth.is_dir() else truth
        if not t.exists():
            raise MissingInputError(f"no ground truth for {p.name} in {truth}", path=str(t))
        pairs.append((p, t))
    if not pairs:
        raise MissingInputError(f"no .traj files in {pred}", path=str(pred))
    return pairs


def _aligned_truth(pred: Trajectory, truth: Trajectory) -> Trajectory:
    """真值按预测的时间取帧 | Truth frames at the predicted times"""
    if len(pred) == len(truth) and np.allclose(pred.times, truth.times):
        return truth
    return Trajectory(times=pred.times, frames=np.stack([truth.at_time(float(t)) for t in pred.times]), source_id=truth.source_id)


def _metric_functions(selected: list[str]) -> dict[str, Callable[..., float]]:
    unknown = sorted(set(selected) - set(EVAL_METRICS))
    if unknown:
        raise ArgumentError(f"unknown metrics {unknown}; choose from {list(EVAL_METRICS)}", metrics=unknown)
    table: dict[str, Callable[..., float]] = {
        "nrmse": lambda p, t, src, pos: nrmse(p, t),
        "smape": lambda p, t, src, pos: smape(p, t),
        "re": lambda p, t, src, pos: rayleigh_error(p, t, src),
        "mre": lambda p, t, src, pos: mre(list(p.frames), list(t.frames), src),
        "err_smooth": lambda p, t, src, pos: err_smooth([p], [t], [pos], np.linspace(0.0, float(pdist(pos).max()), ERR_SMOOTH_BINS + 1)).value,
    }
    return {name: table[name] for name in selected}


def run_eval(args: EvalArguments, common: GlobalArguments) -> dict[str, Any]:
    selected = [m.strip() for m in args.metrics.split(",") if m.strip()]
    functions = _metric_functions(selected)
    needs_source = bool({"re", "mre", "err_smooth"} & set(selected))
    out = _prepare_out(args.out)
    rows: list[MetricRow] = []
    for pred_path, truth_path in _pairs(Path(args.pred), Path(args.truth)):
        pred = read_trajectory(pred_path)
        truth = _aligned_truth(pred, read_trajectory(truth_path))
        source = resolve_source(truth, truth_path) if needs_source else None
        positions = _positions(truth.source_id, truth_path) if "err_smooth" in selected else None
        for name, fn in functions.items():
            rows.append(MetricRow(run_id=pred_path.stem, mesh_id=truth.source_id, metric=name, value=float(fn(pred, truth, source, positions))))
    write_metric_rows(rows, out / "metrics.csv")
    write_metric_summary(rows, out / "metrics.json", metadata={"pred": args.pred, "truth": args.truth})
    _write_resolved(out, {"command": "eval", "metrics": selected}, args, common)
    return {"command": "eval", "rows": len(rows), "metrics": selected}


# —— sensitivity —— #


def run_sensitivity(args: SensitivityArguments, common: GlobalArguments) -> dict[str, Any]:
    cfg = load_config(SensitivityConfig, args.config)
    out = _prepare_out(args.out)
    samples = gen_heat_grid_dataset(cfg.dataset, cfg.seed, common.threads)
    points = []
    for kind in cfg.kinds:
        points += rq_sensitivity(samples, cfg.t_max_values, cfg.seeds, cfg.hidden, kind, cfg.init_scale, estimator=cfg.estimator)
    summary = summarize_sensitivity(points)
    write_sensitivity_csv(points, out / "sensitivity_runs.csv")
    write_sensitivity_csv(summary, out / "sensitivity.csv")
    _write_resolved(out, cfg.model_dump(mode="json"), args, common)
    return {"command": "sensitivity", "kl_mean": {f"{s.kind}@{s.t_max}": s.kl_mean for s in summary}}


# —— bound —— #


def run_bound(args: BoundArguments, common: GlobalArguments) -> dict[str, Any]:
    cfg = load_config(BoundRunConfig, args.config)
    out = _prepare_out(args.out)
    sampler = unit_disk_sampler(cfg.seed, cfg.statistic)
    grid = default_radius_grid(sampler, cfg.radius_points)
    estimate = estimate_bound(sampler, grid, cfg.orbit_samples, cfg.repeats, common.threads)
    unitary = fit_unitary_map(sampler, cfg.fit_steps, cfg.fit_lr)
    report = verify_bound(sampler, unitary, cfg.n_samples, bound=estimate)
    write_bound_report(report, out / "bound_report.json")
    _write_resolved(out, cfg.model_dump(mode="json"), args, common)
    return {"command": "bound", **report.to_dict()}


# —— mesh-prep —— #


def run_mesh_prep(args: MeshPrepArguments, common: GlobalArguments) -> dict[str, Any]:
    mesh = load_mesh(args.input)
    out = _prepare_out(args.out)
    manifold = check_manifold(mesh)
    write_json(out / "manifold_report.json", manifold.to_dict())
    ops = mesh_operators(mesh, rewire=True)
    write_json(out / "operators.json", ops.to_dict())
    if ops.rewiring is None:
        raise ContractError(f"mesh_operators returned no rewiring report for {args.input}", input=args.input)
    write_json(out / "rewiring_report.json", ops.rewiring.to_dict())
    write_json(out / "rewired_mesh.json", ops.mesh.to_dict())
    _write_resolved(out, {"command": "mesh-prep", "input": args.input}, args, common)
    return {"command": "mesh-prep", "vertices": mesh.n, "flips": ops.rewiring.flips, "violations_after": len(ops.rewiring.violations_after)}
