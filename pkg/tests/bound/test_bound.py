# filename: test_bound.py
# @Time    : 2025/11/25 09:30
# @Software: PyCharm
import json
from pathlib import Path

import numpy as np
import pytest
from loguru import logger

from relaxuni.bound import (
    OrbitSampler,
    UnitaryMap,
    estimate_bound,
    evaluate_target,
    fit_unitary_map,
    lower_bound_estimate,
    orbit_norm_variance,
    sample_domain,
    sphere_points,
    unit_disk_sampler,
    verify_bound,
    write_bound_report,
)
from relaxuni.exceptions import ArgumentError, SamplingError
from relaxuni.linalg import is_unitary
from relaxuni.schema import VarianceStatistic

GRID = np.linspace(0.0, 1.0, 50)


class TestSampling:
    def test_sphere_points_on_radius(self, rng: np.random.Generator) -> None:
        pts = sphere_points(rng, 2.5, 100, 4)
        assert np.linalg.norm(pts, axis=1) == pytest.approx(np.full(100, 2.5))

    def test_domain_follows_radial_density(self, rng: np.random.Generator) -> None:
        pts = sample_domain(unit_disk_sampler(), rng, 20000)
        radii = np.linalg.norm(pts, axis=1)
        assert radii.max() <= 1.0
        # p(r) = 2r on [0, 1] has mean 2/3
        assert radii.mean() == pytest.approx(2.0 / 3.0, abs=0.01)

    def test_negative_density_rejected(self) -> None:
        sampler = OrbitSampler(dimension=2, radius_density=lambda r: r - 0.5, target=lambda z: z)
        with pytest.raises(ArgumentError):
            sampler.density([0.0, 1.0])

    def test_non_finite_target_names_point(self) -> None:
        points = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(SamplingError) as exc_info:
            evaluate_target(lambda z: z / np.linalg.norm(z, axis=1, keepdims=True), points)
        assert exc_info.value.context["point"] == [0.0, 0.0]

    def test_bad_sampler_arguments(self) -> None:
        with pytest.raises(ArgumentError):
            OrbitSampler(dimension=0, radius_density=lambda r: r, target=lambda z: z)


class TestOrbitVariance:
    def test_unit_disk_vector_variance_is_one(self) -> None:
        assert orbit_norm_variance(unit_disk_sampler(), 0.7, n_samples=4000) == pytest.approx(1.0, abs=2e-3)

    def test_norm_statistic_vanishes_for_equivariant_target(self) -> None:
        sampler = OrbitSampler(dimension=3, radius_density=lambda r: 3 * r**2, target=lambda z: 2.0 * z)
        assert orbit_norm_variance(sampler, 0.5, n_samples=1000) == pytest.approx(0.0, abs=1e-20)

    @pytest.mark.parametrize(("radius", "n_samples"), [(0.0, 1000), (1.0, 999)])
    def test_arguments_checked(self, radius: float, n_samples: int) -> None:
        with pytest.raises(ArgumentError):
            orbit_norm_variance(unit_disk_sampler(), radius, n_samples=n_samples)

    def test_sampling_error_propagates(self) -> None:
        sampler = OrbitSampler(dimension=2, radius_density=lambda r: 2 * r, target=lambda z: np.full_like(z, np.nan))
        with pytest.raises(SamplingError):
            orbit_norm_variance(sampler, 0.5, n_samples=1000)


class TestLowerBound:
    def test_unit_disk_bound_is_one(self) -> None:
        value = lower_bound_estimate(unit_disk_sampler(), GRID, n_samples=2000, threads=2)
        assert value == pytest.approx(1.0, abs=0.02)

    def test_repeats_are_seeded(self) -> None:
        sampler = unit_disk_sampler(seed=3, statistic=VarianceStatistic.NORM)
        first = estimate_bound(sampler, GRID, n_samples=1000, repeats=2, threads=2)
        second = estimate_bound(sampler, GRID, n_samples=1000, repeats=2, threads=2)
        assert first == second
        assert len(first.repeats) == 2
        assert first.stderr >= 0.0

    def test_single_repeat_has_no_stderr(self) -> None:
        est = estimate_bound(unit_disk_sampler(), GRID, n_samples=1000, repeats=1)
        assert est.stderr == 0.0

    def test_truncated_grid_warns(self) -> None:
        messages: list[str] = []
        sink = logger.add(lambda m: messages.append(str(m)), level="WARNING")
        try:
            lower_bound_estimate(unit_disk_sampler(), np.linspace(0.0, 0.5, 20), n_samples=1000, threads=1)
        finally:
            logger.remove(sink)
        assert any("truncated_mass" in m for m in messages)

    def test_grid_checked(self) -> None:
        with pytest.raises(ArgumentError):
            lower_bound_estimate(unit_disk_sampler(), [0.5, 0.2])
        with pytest.raises(ArgumentError):
            estimate_bound(unit_disk_sampler(), GRID, repeats=0)


class TestVerifyBound:
    def test_fitted_map_is_unitary(self) -> None:
        fitted = fit_unitary_map(unit_disk_sampler(), steps=20, batch_size=256)
        assert is_unitary(fitted.matrix)

    def test_unitary_maps_respect_bound(self, tmp_path: Path) -> None:
        sampler = unit_disk_sampler(seed=1)
        bound = estimate_bound(sampler, GRID, n_samples=1000, repeats=2, threads=2)
        fitted = fit_unitary_map(sampler, steps=60, batch_size=512)
        for unitary_map in (fitted, UnitaryMap(np.eye(2))):
            report = verify_bound(sampler, unitary_map, n_samples=20000, bound=bound)
            assert report.satisfied
            assert report.empirical_error >= report.bound
        path = write_bound_report(report, tmp_path / "bound.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["statistic"] == "vector"
        assert payload["satisfied"] is True

    def test_map_shape_checked(self) -> None:
        with pytest.raises(ArgumentError):
            verify_bound(unit_disk_sampler(), lambda z: z[:, :1], n_samples=100, bound=estimate_bound(unit_disk_sampler(), GRID, n_samples=1000, repeats=1))
