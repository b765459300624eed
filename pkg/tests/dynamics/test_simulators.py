# filename: test_simulators.py
# @Time    : 2025/11/23 13:40
# @Software: PyCharm
"""
热方程、波动方程与 Cahn–Hilliard 模拟器 | Heat, wave and Cahn–Hilliard simulators
"""

import numpy as np
import pytest

from relaxuni.dynamics import (
    CH_DEFAULT_DT,
    MESH_DEFAULT_DT,
    PdeParams,
    ch_potential_derivative,
    get_grid_propagator,
    leapfrog,
    random_bump_field,
    simulate_cahn_hilliard,
    simulate_heat_graph,
    simulate_heat_mesh,
    simulate_wave_mesh,
    wave_energy,
    wave_max_dt,
)
from relaxuni.exceptions import ArgumentError, StabilityError
from relaxuni.graph import grid_graph
from relaxuni.mesh import MeshOperators, cotangent_laplacian, icosphere, mesh_operators
from relaxuni.schema import PdeKind


@pytest.fixture(scope="module")
def sphere_ops() -> MeshOperators:
    return mesh_operators(icosphere(2))


@pytest.fixture
def bump() -> np.ndarray:
    return random_bump_field(icosphere(2).positions, np.random.default_rng(11), bumps=3, width=0.3)


class TestGraphHeat:
    def test_first_frame_is_initial(self, rng: np.random.Generator) -> None:
        h0 = rng.uniform(size=12)
        traj = simulate_heat_graph(grid_graph(3, 4), h0, tau=0.2, times=[0.0, 1.0])
        np.testing.assert_array_equal(traj.frames[0, :, 0], h0)

    def test_sqrt_degree_mass_conserved(self, rng: np.random.Generator) -> None:
        g = grid_graph(4, 5)
        h0 = rng.uniform(size=(20, 1))
        traj = simulate_heat_graph(g, h0, tau=0.2, times=[0.0, 1.0, 3.0, 4.0])
        mass = np.sqrt(g.degrees) @ traj.frames[:, :, 0].T
        np.testing.assert_allclose(mass, mass[0], rtol=1e-10)

    def test_spectral_propagator_matches_matrix_exponential(self, rng: np.random.Generator) -> None:
        g = grid_graph(5, 6)
        h0 = rng.uniform(size=(30, 1))
        times = np.array([0.5, 3.0, 4.0])
        direct = simulate_heat_graph(g, h0, tau=0.2, times=times).frames
        spectral = get_grid_propagator(5, 6).propagate(h0, 0.2, times)
        np.testing.assert_allclose(spectral, direct, atol=1e-10)

    def test_propagator_cached(self) -> None:
        assert get_grid_propagator(4, 4) is get_grid_propagator(4, 4)

    def test_rejects_bad_tau(self) -> None:
        with pytest.raises(ArgumentError):
            simulate_heat_graph(grid_graph(2, 2), np.ones(4), tau=0.0, times=[0.0])


class TestMeshHeat:
    def test_area_weighted_mass_drift(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        traj = simulate_heat_mesh(sphere_ops, bump, alpha=1.0, dt=1e-3, steps=50)
        mass = np.einsum("i,kij->k", sphere_ops.areas, traj.frames)
        assert np.max(np.abs(np.diff(mass))) < 1e-8

    def test_maximum_principle(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        traj = simulate_heat_mesh(sphere_ops, bump, alpha=1.0, dt=1e-2, steps=20)
        assert traj.frames.max() <= bump.max() + 1e-12
        assert traj.frames.min() >= bump.min() - 1e-12

    def test_times_and_source(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        traj = simulate_heat_mesh(sphere_ops, bump, alpha=0.5, dt=0.01, steps=4)
        np.testing.assert_allclose(traj.times, [0.0, 0.01, 0.02, 0.03, 0.04])
        assert traj.source_id == "icosphere2"


class TestWave:
    def test_time_reversal(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        dt = 0.2 * wave_max_dt(sphere_ops, 1.0)
        forward = simulate_wave_mesh(sphere_ops, bump, np.zeros_like(bump), c=1.0, dt=dt, steps=100)
        assert forward.velocities is not None
        us, _ = leapfrog(cotangent_laplacian(sphere_ops), forward.frames[-1], -forward.velocities[-1], 1.0, dt, 100)
        assert np.max(np.abs(us[-1] - bump)) < 1e-6

    def test_energy_nearly_conserved(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        dt = 0.05 * wave_max_dt(sphere_ops, 1.0)
        traj = simulate_wave_mesh(sphere_ops, bump, np.zeros_like(bump), c=1.0, dt=dt, steps=200)
        assert traj.velocities is not None
        e0 = wave_energy(sphere_ops, traj.frames[0], traj.velocities[0], 1.0)
        e1 = wave_energy(sphere_ops, traj.frames[-1], traj.velocities[-1], 1.0)
        assert e1 == pytest.approx(e0, rel=1e-2)

    def test_cfl_violation(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        max_dt = wave_max_dt(sphere_ops, 1.0)
        with pytest.raises(StabilityError) as exc:
            simulate_wave_mesh(sphere_ops, bump, np.zeros_like(bump), c=1.0, dt=1.5 * max_dt, steps=3)
        assert exc.value.context["max_dt"] == pytest.approx(max_dt)


class TestCahnHilliard:
    def test_bounded_over_500_steps(self, sphere_ops: MeshOperators, rng: np.random.Generator) -> None:
        c0 = rng.uniform(0.45, 0.55, size=(sphere_ops.n, 1))
        traj = simulate_cahn_hilliard(sphere_ops, c0, mobility=1.0, lam=1e-2, dt=CH_DEFAULT_DT, steps=500)
        assert len(traj) == 501
        assert np.all(np.isfinite(traj.frames))
        assert np.max(np.abs(traj.frames)) < 2.0

    def test_mass_conserved(self, sphere_ops: MeshOperators, rng: np.random.Generator) -> None:
        c0 = rng.uniform(0.45, 0.55, size=(sphere_ops.n, 1))
        traj = simulate_cahn_hilliard(sphere_ops, c0, mobility=1.0, lam=1e-2, dt=CH_DEFAULT_DT, steps=100)
        mass = np.einsum("i,kij->k", sphere_ops.areas, traj.frames)
        np.testing.assert_allclose(np.diff(mass), 0.0, atol=1e-6 * abs(mass[0]))

    def test_constant_field_is_fixed_point(self, sphere_ops: MeshOperators) -> None:
        traj = simulate_cahn_hilliard(sphere_ops, np.full((sphere_ops.n, 1), 0.3), mobility=1.0, lam=1e-2, dt=CH_DEFAULT_DT, steps=10)
        np.testing.assert_allclose(traj.frames[-1], 0.3, atol=1e-10)

    def test_potential_has_wells_at_zero_and_one(self) -> None:
        c = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(ch_potential_derivative(c), 0.0, atol=1e-12)
        # 势阱外侧被拉回 | restoring outside the wells
        assert ch_potential_derivative(np.array([1.5]))[0] > 0
        assert ch_potential_derivative(np.array([-0.5]))[0] < 0

    def test_default_step_per_equation(self) -> None:
        assert PdeParams(kind=PdeKind.CAHN_HILLIARD).step_size == CH_DEFAULT_DT
        assert PdeParams(kind=PdeKind.HEAT_MESH).step_size == MESH_DEFAULT_DT
        assert PdeParams(kind=PdeKind.CAHN_HILLIARD, dt=5e-5).step_size == 5e-5

    def test_rejects_non_positive_mobility(self, sphere_ops: MeshOperators, bump: np.ndarray) -> None:
        with pytest.raises(ArgumentError):
            simulate_cahn_hilliard(sphere_ops, bump, mobility=0.0, lam=1e-2, dt=1e-5, steps=1)
