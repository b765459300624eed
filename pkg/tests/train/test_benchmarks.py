# filename: test_benchmarks.py
# @Time    : 2025/11/26 10:20
# @Software: PyCharm
"""
方向性基准：各架构训练后的误差与平滑度排序 | Directional benchmarks: error and smoothness orderings after training

运行较慢，默认用 `-m slow` 单独执行。
Slow; run them on their own with `-m slow`.
"""

import math
from collections.abc import Callable

import numpy as np
import pytest

from relaxuni.dynamics import GridHeatConfig, MeshDatasetConfig, MeshSample, PdeParams, gen_heat_grid_dataset, gen_mesh_dataset
from relaxuni.layers import ModelSpec, build_model, gcn_spec, lie_unigraph_spec, parameter_count, r_unigraph_spec, r_unimesh_spec
from relaxuni.mesh import icosphere, perturbed_sphere, torus
from relaxuni.metrics import nrmse, rayleigh_error
from relaxuni.schema import OperatorSource, PdeKind
from relaxuni.train import TrainConfig, ensemble, heat_examples, mesh_examples, rollout

PARAMETER_BUDGET = 50_000
HEAT_SEEDS = tuple(range(5))
MESH_WINDOW = 5
MESH_ROLLOUT = 196


def _median(values: list[float]) -> float:
    return float(np.median(values))


@pytest.mark.slow
@pytest.mark.timeout(1800)
class TestHeatGridOrdering:
    @pytest.fixture(scope="class")
    def results(self) -> dict[str, tuple[float, float]]:
        samples = gen_heat_grid_dataset(GridHeatConfig(count=200), seed=0)
        cfg = TrainConfig(epochs=8, bptt_rollout=1, input_window=1)
        specs: dict[str, ModelSpec] = {
            "relaxed": r_unigraph_spec(t_max=3),
            "lie": lie_unigraph_spec(),
            "gcn": gcn_spec(),
        }
        out = {}
        for name, spec in specs.items():
            assert parameter_count(spec) <= PARAMETER_BUDGET
            examples = heat_examples(samples, build_model(spec))
            runs = ensemble(spec, examples, cfg, HEAT_SEEDS)
            assert not any(h.diverged for _, _, h in runs)
            val = _median([h.final_val_mse for _, _, h in runs])
            mre = _median([abs(h.records[-1].mean_pred_rq - h.records[-1].mean_target_rq) for _, _, h in runs])
            out[name] = (val, mre)
        return out

    def test_val_mse_ordering(self, results: dict[str, tuple[float, float]]) -> None:
        assert results["relaxed"][0] < results["lie"][0] < results["gcn"][0], results

    def test_mre_ordering(self, results: dict[str, tuple[float, float]]) -> None:
        assert results["relaxed"][1] < results["gcn"][1], results
        assert results["relaxed"][1] < results["lie"][1], results


def _mesh_heat(meshes: list, inits: int, seed: int) -> list[MeshSample]:
    cfg = MeshDatasetConfig(pde=PdeParams(kind=PdeKind.HEAT_MESH, dt=1e-3, steps=MESH_WINDOW + MESH_ROLLOUT - 1), inits=inits)
    return gen_mesh_dataset(meshes, cfg, seed=seed)


def _rollout_scores(spec_fn: Callable[[], ModelSpec], train_samples: list[MeshSample], held_out: list[MeshSample]) -> tuple[float, float]:
    spec = spec_fn()
    cfg = TrainConfig(epochs=10, batch_size=8, bptt_rollout=3, input_window=MESH_WINDOW, seed=0)
    model = build_model(spec)
    [(_, model, history)] = ensemble(spec, mesh_examples(train_samples, model), cfg, seeds=(0,))
    assert not history.diverged
    res, errs = [], []
    for s in held_out:
        truth = s.trajectory.frames[MESH_WINDOW : MESH_WINDOW + MESH_ROLLOUT]
        pred = rollout(model, model.operator(s.ops), s.trajectory.frames[:MESH_WINDOW], MESH_ROLLOUT)
        if len(pred) < MESH_ROLLOUT:
            res.append(math.inf)
            errs.append(math.inf)
            continue
        res.append(rayleigh_error(pred.frames, truth, s.ops))
        errs.append(nrmse(pred.frames, truth))
    return _median(res), _median(errs)


@pytest.mark.slow
@pytest.mark.timeout(3600)
class TestMeshHeatRollout:
    def test_r_unimesh_beats_gcn_on_held_out_sphere(self) -> None:
        rng = np.random.default_rng(11)
        train_meshes = [perturbed_sphere(2, 0.05, rng), perturbed_sphere(2, 0.1, rng), torus()]
        train_samples = _mesh_heat(train_meshes, inits=2, seed=0)
        held_out = _mesh_heat([icosphere(2)], inits=5, seed=1)

        unimesh = _rollout_scores(lambda: r_unimesh_spec(hidden=32, depth=4, t_max=3, input_window=MESH_WINDOW), train_samples, held_out)
        gcn = _rollout_scores(
            lambda: gcn_spec(hidden=32, depth=4, input_window=MESH_WINDOW, operator_source=OperatorSource.MESH_WEIGHTED),
            train_samples,
            held_out,
        )
        assert unimesh[0] < gcn[0], (unimesh, gcn)
        assert unimesh[1] < gcn[1], (unimesh, gcn)
