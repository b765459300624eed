"""
真值模拟器与数据集生成 | Ground-truth simulators and dataset generators
"""

from relaxuni.dynamics.datasets import (
    DatasetManifest,
    GridHeatConfig,
    HeatSample,
    ManifestEntry,
    MeshDatasetConfig,
    MeshSample,
    gen_heat_grid_dataset,
    gen_mesh_dataset,
    load_heat_grid_dataset,
    load_manifest,
    load_mesh_dataset,
    random_bump_field,
    save_heat_grid_dataset,
    save_mesh_dataset,
)
from relaxuni.dynamics.heat_graph import GridHeatPropagator, get_grid_propagator, simulate_heat_graph
from relaxuni.dynamics.mesh_pde import (
    ch_potential_derivative,
    leapfrog,
    simulate_cahn_hilliard,
    simulate_heat_mesh,
    simulate_wave_mesh,
    wave_energy,
    wave_max_dt,
)
from relaxuni.dynamics.params import CH_DEFAULT_DT, MESH_DEFAULT_DT, PdeParams
from relaxuni.dynamics.trajectory import Trajectory, read_trajectory, write_trajectory

__all__ = [
    "CH_DEFAULT_DT",
    "MESH_DEFAULT_DT",
    "DatasetManifest",
    "GridHeatConfig",
    "GridHeatPropagator",
    "HeatSample",
    "ManifestEntry",
    "MeshDatasetConfig",
    "MeshSample",
    "PdeParams",
    "Trajectory",
    "ch_potential_derivative",
    "gen_heat_grid_dataset",
    "gen_mesh_dataset",
    "get_grid_propagator",
    "leapfrog",
    "load_heat_grid_dataset",
    "load_manifest",
    "load_mesh_dataset",
    "random_bump_field",
    "read_trajectory",
    "save_heat_grid_dataset",
    "save_mesh_dataset",
    "simulate_cahn_hilliard",
    "simulate_heat_graph",
    "simulate_heat_mesh",
    "simulate_wave_mesh",
    "wave_energy",
    "wave_max_dt",
    "write_trajectory",
]
