# filename: test_sensitivity.py
# @Time    : 2025/11/24 11:40
# @Software: PyCharm
import csv
from pathlib import Path

import numpy as np
import pytest

from relaxuni.dynamics import GridHeatConfig, HeatSample, gen_heat_grid_dataset
from relaxuni.exceptions import ArgumentError
from relaxuni.schema import KlEstimator, LayerKind
from relaxuni.train import SENSITIVITY_T_MAX, SensitivityPoint, rq_sensitivity, summarize_sensitivity, write_sensitivity_csv


class TestRqSensitivity:
    def test_one_point_per_seed_and_order(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples, t_max_values=(1, 3), seeds=(0, 1, 2), hidden=8)
        assert len(points) == 6
        assert {(p.seed, p.t_max) for p in points} == {(s, t) for s in (0, 1, 2) for t in (1, 3)}
        assert all(p.kl >= 0.0 for p in points)

    def test_exact_layer_keeps_distribution(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples, t_max_values=(10,), seeds=(0, 1), hidden=8, init_scale=0.1)
        assert all(p.kl == pytest.approx(0.0, abs=1e-9) for p in points)

    def test_seeded(self, heat_samples: list[HeatSample]) -> None:
        first = rq_sensitivity(heat_samples, t_max_values=(2,), seeds=(4,), hidden=8)
        assert first == rq_sensitivity(heat_samples, t_max_values=(2,), seeds=(4,), hidden=8)

    def test_gcn_ignores_order(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples, t_max_values=(1, 5), seeds=(0,), hidden=8, kind=LayerKind.GCN)
        assert points[0].kl == pytest.approx(points[1].kl)

    def test_sep_uni_runs_on_complex_features(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples[:4], t_max_values=(2,), seeds=(0,), hidden=4, kind=LayerKind.SEP_UNI)
        assert points[0].kind == "sep_uni"
        assert np.isfinite(points[0].kl)

    @pytest.mark.parametrize(
        "kwargs",
        [{"t_max_values": (0, 1)}, {"kind": LayerKind.LINEAR}],
    )
    def test_bad_arguments(self, heat_samples: list[HeatSample], kwargs: dict) -> None:
        with pytest.raises(ArgumentError):
            rq_sensitivity(heat_samples, seeds=(0,), hidden=8, **kwargs)

    def test_empty_samples(self) -> None:
        with pytest.raises(ArgumentError):
            rq_sensitivity([])

    def test_histogram_estimator_selectable(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples, t_max_values=(10,), seeds=(0,), hidden=8, init_scale=0.1, estimator=KlEstimator.HISTOGRAM)
        assert points[0].kl == pytest.approx(0.0, abs=1e-12)

    def test_kde_separates_small_truncation_errors(self, heat_samples: list[HeatSample]) -> None:
        points = rq_sensitivity(heat_samples, t_max_values=(5, 7), seeds=(0,), hidden=8)
        kl = {p.t_max: p.kl for p in points}
        assert 0.0 < kl[7] < kl[5]

    @pytest.mark.slow
    @pytest.mark.timeout(300)
    def test_kl_decays_with_order_on_grid_heat(self) -> None:
        samples = gen_heat_grid_dataset(GridHeatConfig(count=200), seed=0)
        points = rq_sensitivity(samples, t_max_values=SENSITIVITY_T_MAX, seeds=tuple(range(10)), hidden=16)
        means = [s.kl_mean for s in summarize_sensitivity(points)]
        assert all(later < earlier for earlier, later in zip(means, means[1:])), means
        assert means[-1] < 0.01 * means[0]


class TestSensitivityReport:
    def test_summary_groups_by_kind_and_order(self) -> None:
        points = [SensitivityPoint("lie_uni", 1, seed, kl) for seed, kl in enumerate([0.1, 0.3])]
        points.append(SensitivityPoint("lie_uni", 2, 0, 0.05))
        summary = summarize_sensitivity(points)
        assert [(s.t_max, s.seeds) for s in summary] == [(1, 2), (2, 1)]
        assert summary[0].kl_mean == pytest.approx(0.2)
        assert summary[0].kl_std == pytest.approx(0.1)

    def test_csv_header_follows_rows(self, tmp_path: Path) -> None:
        path = write_sensitivity_csv([SensitivityPoint("gcn", 1, 0, 0.5)], tmp_path / "sens.csv")
        with path.open(encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == ["kind", "t_max", "seed", "kl"]
        assert float(rows[0]["kl"]) == pytest.approx(0.5)

    def test_empty_csv_uses_summary_columns(self, tmp_path: Path) -> None:
        path = write_sensitivity_csv([], tmp_path / "empty.csv")
        assert path.read_text(encoding="utf-8").strip() == "kind,t_max,kl_mean,kl_std,seeds"
