# filename: test_cli.py
# @Time    : 2025/11/25 13:40
# @Software: PyCharm
import dataclasses
import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from pytest_mock import MockerFixture

from relaxuni.cli.args import EvalArguments
from relaxuni.cli.main import COMMANDS
from relaxuni.dynamics import Trajectory, read_trajectory
from relaxuni.mesh import load_mesh, mesh_operators, perturbed_sphere, save_mesh

HEAT_DATA = {"kind": "heat_grid", "seed": 7, "heat": {"count": 6, "sources": 3, "side_mean": 5.0, "side_std": 1.0, "min_side": 4}}
TRAIN = {
    "preset": {"preset": "r_unigraph", "hidden": 4, "depth": 1},
    "train": {"epochs": 2, "batch_size": 2},
}


@pytest.fixture
def heat_data(run_cli: Callable, write_config: Callable, tmp_path: Path) -> Path:
    code, _ = run_cli("gen-data", "--config", str(write_config("data.json", HEAT_DATA)), "--out", str(tmp_path / "data"))
    assert code == 0
    return tmp_path / "data"


class TestGenData:
    def test_same_seed_same_bytes(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        config = str(write_config("data.json", HEAT_DATA))
        for name in ("a", "b"):
            code, payload = run_cli("gen-data", "--config", config, "--out", str(tmp_path / name))
            assert code == 0
            assert payload["samples"] == 6
        assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()
        first = sorted((tmp_path / "a" / "trajectories").glob("*.traj"))
        assert len(first) == 6
        assert all(p.read_bytes() == (tmp_path / "b" / "trajectories" / p.name).read_bytes() for p in first)

    def test_resolved_files_written(self, heat_data: Path) -> None:
        resolved = json.loads((heat_data / "resolved_config.json").read_text(encoding="utf-8"))
        assert resolved["seed"] == 7
        args = json.loads((heat_data / "resolved_args.json").read_text(encoding="utf-8"))
        assert args["global"]["log_level"] == "WARNING"

    def test_unknown_key_is_config_error(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        config = write_config("bad.json", {**HEAT_DATA, "colour": "blue"})
        code, payload = run_cli("gen-data", "--config", str(config), "--out", str(tmp_path / "out"))
        assert code == 2
        assert payload["error"] == "ConfigError"

    def test_missing_config(self, run_cli: Callable, tmp_path: Path) -> None:
        code, payload = run_cli("gen-data", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "out"))
        assert code == 3
        assert payload["error"] == "MissingInputError"
        assert payload["exit_code"] == 3


class TestTrainAndRollout:
    def test_pipeline(self, run_cli: Callable, write_config: Callable, heat_data: Path, tmp_path: Path) -> None:
        code, trained = run_cli("train", "--config", str(write_config("train.json", TRAIN)), "--data", str(heat_data), "--out", str(tmp_path / "run"))
        assert code == 0
        assert trained["diverged"] is False
        assert (tmp_path / "run" / "history.csv").exists()
        assert Path(trained["checkpoint"]).with_name("model.json.params").exists()

        init = heat_data / "trajectories" / "sample_00000.traj"
        code, rolled = run_cli("rollout", "--checkpoint", trained["checkpoint"], "--init", str(init), "--steps", "3", "--out", str(tmp_path / "pred"))
        assert code == 0
        assert rolled["frames"] == 3
        pred = read_trajectory(rolled["trajectory"])
        assert pred.times == pytest.approx([4.0, 5.0, 6.0])
        assert pred.source_id == read_trajectory(init).source_id

    def test_ensemble_seeds(self, run_cli: Callable, write_config: Callable, heat_data: Path, tmp_path: Path) -> None:
        config = write_config("train.json", {**TRAIN, "seeds": [1, 2]})
        code, trained = run_cli("train", "--config", str(config), "--data", str(heat_data), "--out", str(tmp_path / "run"))
        assert code == 0
        assert [r["seed"] for r in trained["ensemble"]] == [1, 2]
        assert (tmp_path / "run" / "history_seed2.csv").exists()

    def test_window_mismatch_is_config_error(self, run_cli: Callable, write_config: Callable, heat_data: Path, tmp_path: Path) -> None:
        config = write_config("train.json", {**TRAIN, "train": {"input_window": 2}})
        code, _ = run_cli("train", "--config", str(config), "--data", str(heat_data), "--out", str(tmp_path / "run"))
        assert code == 2


class TestEval:
    @pytest.fixture
    def trajectory(self, tmp_path: Path, rng: np.random.Generator) -> Path:
        traj = Trajectory(times=[1.0, 2.0, 3.0], frames=rng.uniform(0.1, 1.0, size=(3, 12, 1)), source_id="grid:3x4")
        return traj.save(tmp_path / "truth" / "sample.traj")

    def test_identical_prediction_scores_zero(self, run_cli: Callable, trajectory: Path, tmp_path: Path) -> None:
        code, payload = run_cli("eval", "--pred", str(trajectory), "--truth", str(trajectory), "--out", str(tmp_path / "eval"))
        assert code == 0
        assert payload["rows"] == 4
        summary = json.loads((tmp_path / "eval" / "metrics.json").read_text(encoding="utf-8"))
        for metric in ("nrmse", "smape", "re", "mre"):
            assert summary["metrics"][metric]["mean"] == pytest.approx(0.0, abs=1e-12)
        assert summary["metadata"]["rollout_scale"] == 196

    def test_err_smooth_on_grid(self, run_cli: Callable, trajectory: Path, tmp_path: Path) -> None:
        code, _ = run_cli("eval", "--pred", str(trajectory), "--truth", str(trajectory), "--metrics", "err_smooth", "--out", str(tmp_path / "eval"))
        assert code == 0
        rows = (tmp_path / "eval" / "metrics.csv").read_text(encoding="utf-8").splitlines()
        assert rows[0] == "run_id,mesh_id,metric,value"
        assert rows[1] == "sample,grid:3x4,err_smooth,0.0"

    def test_unknown_metric(self, run_cli: Callable, trajectory: Path, tmp_path: Path) -> None:
        code, payload = run_cli("eval", "--pred", str(trajectory), "--truth", str(trajectory), "--metrics", "nrmse,bleu", "--out", str(tmp_path / "eval"))
        assert code == 10
        assert payload["context"]["metrics"] == ["bleu"]

    def test_missing_prediction(self, run_cli: Callable, trajectory: Path, tmp_path: Path) -> None:
        code, _ = run_cli("eval", "--pred", str(tmp_path / "missing.traj"), "--truth", str(trajectory), "--out", str(tmp_path / "eval"))
        assert code == 3


class TestSensitivityAndBound:
    def test_sensitivity(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        config = write_config(
            "sens.json",
            {"dataset": {"count": 6, "sources": 3, "side_mean": 5.0, "side_std": 0.0, "min_side": 4}, "t_max_values": [1, 2], "seeds": [0, 1], "hidden": 4},
        )
        code, payload = run_cli("sensitivity", "--config", str(config), "--out", str(tmp_path / "sens"))
        assert code == 0
        assert set(payload["kl_mean"]) == {"lie_uni@1", "lie_uni@2"}
        assert len((tmp_path / "sens" / "sensitivity_runs.csv").read_text(encoding="utf-8").splitlines()) == 5

    def test_bound_on_unit_disk(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        config = write_config(
            "bound.json",
            {"n_samples": 20000, "radius_points": 50, "orbit_samples": 1000, "repeats": 2, "fit_steps": 20},
        )
        code, payload = run_cli("--threads", "2", "bound", "--config", str(config), "--out", str(tmp_path / "bound"))
        assert code == 0
        assert payload["bound"] == pytest.approx(1.0, abs=0.02)
        assert payload["satisfied"] is True
        assert (tmp_path / "bound" / "bound_report.json").exists()

    def test_bad_bound_config(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        code, _ = run_cli("bound", "--config", str(write_config("bound.json", {"orbit_samples": 10})), "--out", str(tmp_path / "bound"))
        assert code == 2


class TestMeshPrep:
    def test_rewires_perturbed_sphere(self, run_cli: Callable, tmp_path: Path) -> None:
        mesh_path = save_mesh(perturbed_sphere(1, 0.15, np.random.default_rng(2)), tmp_path / "bumpy.off")
        code, payload = run_cli("mesh-prep", "--in", str(mesh_path), "--out", str(tmp_path / "prep"))
        assert code == 0
        assert payload["vertices"] == 42
        assert payload["violations_after"] == 0
        for name in ("manifold_report.json", "operators.json", "rewiring_report.json", "rewired_mesh.json"):
            assert (tmp_path / "prep" / name).exists()

    def test_unknown_suffix(self, run_cli: Callable, tmp_path: Path) -> None:
        path = tmp_path / "mesh.ply"
        path.write_text("ply\n", encoding="utf-8")
        code, payload = run_cli("mesh-prep", "--in", str(path), "--out", str(tmp_path / "prep"))
        assert code == 4
        assert payload["error"] == "FormatError"

    def test_missing_rewiring_report_is_contract_error(self, run_cli: Callable, mocker: MockerFixture, tmp_path: Path) -> None:
        mesh_path = save_mesh(perturbed_sphere(1, 0.05, np.random.default_rng(3)), tmp_path / "sphere.off")
        plain = dataclasses.replace(mesh_operators(load_mesh(mesh_path)), rewiring=None)
        mocker.patch("relaxuni.cli.commands.mesh_operators", return_value=plain)
        code, payload = run_cli("mesh-prep", "--in", str(mesh_path), "--out", str(tmp_path / "prep"))
        assert code == 12
        assert payload["error"] == "ContractError"
        assert not (tmp_path / "prep" / "rewiring_report.json").exists()


class TestErrorBoundary:
    def test_unexpected_error_exits_one(self, run_cli: Callable, mocker: MockerFixture, tmp_path: Path) -> None:
        def boom(args: EvalArguments, common: object) -> dict:
            raise RuntimeError("solver exploded")

        mocker.patch.dict(COMMANDS, {"eval": (EvalArguments, boom, "eval")})
        code, payload = run_cli("eval", "--pred", "p", "--truth", "t", "--out", str(tmp_path / "eval"))
        assert code == 1
        assert payload["error"] == "RelaxUniError"
        assert payload["message"] == "solver exploded"
        assert payload["detail"] == "RuntimeError"


@pytest.mark.slow
@pytest.mark.timeout(900)
class TestMeshPipeline:
    def test_mesh_heat_train_rollout_eval(self, run_cli: Callable, write_config: Callable, tmp_path: Path) -> None:
        data_cfg: dict[str, Any] = {
            "kind": "mesh",
            "seed": 1,
            "mesh": {"inits": 2, "pde": {"kind": "heat_mesh", "dt": 1e-3, "steps": 12}},
            "meshes": [{"shape": "icosphere", "subdivisions": 1, "name": "ball"}],
        }
        code, _ = run_cli("gen-data", "--config", str(write_config("data.json", data_cfg)), "--out", str(tmp_path / "data"))
        assert code == 0
        train_cfg = {
            "preset": {"preset": "r_unimesh", "hidden": 4, "depth": 1, "input_window": 2},
            "train": {"epochs": 1, "input_window": 2, "bptt_rollout": 2, "batch_size": 4},
        }
        code, trained = run_cli("train", "--config", str(write_config("train.json", train_cfg)), "--data", str(tmp_path / "data"), "--out", str(tmp_path / "run"))
        assert code == 0
        init = tmp_path / "data" / "trajectories" / "ball_0.traj"
        code, rolled = run_cli("rollout", "--checkpoint", trained["checkpoint"], "--init", str(init), "--steps", "4", "--out", str(tmp_path / "pred"))
        assert code == 0
        code, _ = run_cli("eval", "--pred", rolled["trajectory"], "--truth", str(init), "--metrics", "nrmse,re", "--out", str(tmp_path / "eval"))
        assert code == 0
