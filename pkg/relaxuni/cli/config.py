# filename: config.py
# @Time    : 2025/11/22 09:10
# @Software: PyCharm
"""
实验配置 | Experiment configuration

每个子命令一个 confz 配置类，只从 --config 指定的 JSON 文件加载（不读环境变量），未知键一律拒绝。
One confz config class per sub-command, loaded only from the JSON file given by --config (no environment
variables); unknown keys are rejected.
"""

import dataclasses
from enum import Enum
from pathlib import Path
from typing import Any, Literal, TypeVar

from confz import BaseConfig, FileSource
from confz.base_config import BaseConfigMetaclass
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from relaxuni.dynamics.datasets import GridHeatConfig, MeshDatasetConfig
from relaxuni.exceptions import ConfigError, RelaxUniError
from relaxuni.layers.spec import (
    DEFAULT_T_MAX,
    RELAXED_T_MAX,
    ModelSpec,
    gcn_spec,
    lie_unigraph_spec,
    r_unigraph_spec,
    r_unimesh_spec,
    sep_unigraph_spec,
)
from relaxuni.mesh.io import load_mesh
from relaxuni.mesh.shapes import flat_grid_patch, icosahedron, icosphere, perturbed_sphere, torus
from relaxuni.mesh.trimesh import TriMesh
from relaxuni.schema import Activation, KlEstimator, LayerKind, OperatorSource, VarianceStatistic
from relaxuni.train.config import LR_GRID, TrainConfig
from relaxuni.train.sensitivity import SENSITIVITY_INIT_SCALE, SENSITIVITY_T_MAX
from relaxuni.utils import require_file, seed_stream

__all__ = [
    "BoundRunConfig",
    "GenDataConfig",
    "MeshEntry",
    "MeshShape",
    "ModelPreset",
    "PresetConfig",
    "SensitivityConfig",
    "TrainRunConfig",
    "build_mesh",
    "load_config",
]

ConfigT = TypeVar("ConfigT", bound=BaseConfig)


class MeshShape(str, Enum):
    ICOSAHEDRON = "icosahedron"
    ICOSPHERE = "icosphere"
    PERTURBED_SPHERE = "perturbed_sphere"
    TORUS = "torus"
    FLAT_PATCH = "flat_patch"


class MeshEntry(BaseModel):
    """
    内置形状或网格文件二选一 | Either a built-in shape or a mesh file

    Attributes:
        name: Mesh name in the dataset (defaults to the shape or file stem)
        shape: Built-in shape
        path: OFF / OBJ file, relative to the config file
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str | None = None
    shape: MeshShape | None = None
    path: str | None = None
    subdivisions: int = Field(default=2, ge=0, title="细分次数")
    amplitude: float = Field(default=0.05, ge=0, title="径向扰动幅度")
    rows: int = Field(default=8, ge=2)
    cols: int = Field(default=8, ge=2)
    major_radius: float = Field(default=1.0, gt=0)
    minor_radius: float = Field(default=0.4, gt=0)

    @model_validator(mode="after")
    def _one_source(self) -> "MeshEntry":
        if (self.shape is None) == (self.path is None):
            raise ValueError("a mesh entry needs exactly one of shape / path")
        return self


def build_mesh(entry: MeshEntry, seed: int, index: int, base_dir: str | Path = ".") -> TriMesh:
    """
    Raises:
        MissingInputError: If entry.path does not exist
    """
    if entry.path is not None:
        path = Path(entry.path)
        mesh = load_mesh(require_file(path if path.is_absolute() else Path(base_dir) / path))
    else:
        match entry.shape:
            case MeshShape.ICOSAHEDRON:
                mesh = icosahedron()
            case MeshShape.ICOSPHERE:
                mesh = icosphere(entry.subdivisions)
            case MeshShape.PERTURBED_SPHERE:
                mesh = perturbed_sphere(entry.subdivisions, entry.amplitude, seed_stream(seed, "mesh_shape", index))
            case MeshShape.TORUS:
                mesh = torus(entry.major_radius, entry.minor_radius)
            case _:
                mesh = flat_grid_patch(entry.rows, entry.cols)
    # 名称唯一，避免数据集文件互相覆盖 | unique names keep dataset files apart
    return dataclasses.replace(mesh, name=entry.name or f"{mesh.name}_{index}")


class ModelPreset(str, Enum):
    GCN = "gcn"
    LIE_UNIGRAPH = "lie_unigraph"
    R_UNIGRAPH = "r_unigraph"
    SEP_UNIGRAPH = "sep_unigraph"
    R_UNIMESH = "r_unimesh"


class PresetConfig(BaseModel):
    """架构预设 | Architecture preset; unset fields take the preset's defaults"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    preset: ModelPreset
    channels: int = Field(default=1, ge=1)
    hidden: int | None = Field(default=None, ge=1)
    depth: int = Field(default=4, ge=1)
    input_window: int = Field(default=1, ge=1)
    t_max: int | None = Field(default=None, ge=1)
    decoder: LayerKind = LayerKind.MLP_SIN
    activation: Activation = Activation.RELU
    operator_source: OperatorSource | None = None
    seed: int = 0

    def build(self) -> ModelSpec:
        common: dict[str, Any] = {"channels": self.channels, "depth": self.depth, "input_window": self.input_window, "seed": self.seed}
        if self.hidden is not None:
            common["hidden"] = self.hidden
        match self.preset:
            case ModelPreset.GCN:
                source = self.operator_source or OperatorSource.GRAPH_GCN
                return gcn_spec(activation=self.activation, operator_source=source, **common)
            case ModelPreset.LIE_UNIGRAPH:
                return lie_unigraph_spec(t_max=self.t_max or DEFAULT_T_MAX, **common)
            case ModelPreset.R_UNIGRAPH:
                return r_unigraph_spec(t_max=self.t_max or RELAXED_T_MAX, **common)
            case ModelPreset.SEP_UNIGRAPH:
                return sep_unigraph_spec(t_max=self.t_max or DEFAULT_T_MAX, **common)
            case _:
                return r_unimesh_spec(t_max=self.t_max or RELAXED_T_MAX, decoder=self.decoder, **common)


class _StrictConfig(BaseConfig, metaclass=BaseConfigMetaclass):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GenDataConfig(_StrictConfig):
    """
    gen-data 配置 | gen-data configuration

    Attributes:
        kind: heat_grid (graph heat pairs) or mesh (PDE trajectories on meshes)
        seed: Top-level seed
        heat: Grid heat dataset parameters
        mesh: Mesh dataset parameters (PDE, initializations)
        meshes: Meshes to simulate on
    """

    kind: Literal["heat_grid", "mesh"] = "heat_grid"
    seed: int = 0
    heat: GridHeatConfig = Field(default_factory=GridHeatConfig)
    mesh: MeshDatasetConfig = Field(default_factory=MeshDatasetConfig)
    meshes: list[MeshEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _meshes_for_mesh_kind(self) -> "GenDataConfig":
        if self.kind == "mesh" and not self.meshes:
            raise ValueError("kind 'mesh' needs at least one entry in meshes")
        return self


class TrainRunConfig(_StrictConfig):
    """
    train 配置：model 与 preset 二选一 | train configuration, either model or preset

    Attributes:
        model: Full model spec
        preset: Architecture preset
        train: Optimizer and loop settings
        sweep_lr: Run the learning-rate grid and keep the best model
        lr_grid: Learning rates of the sweep
        seeds: Extra ensemble seeds; each gets its own history CSV
        max_examples: Use only the first N dataset entries
        rewire: Delaunay-rewire meshes before building operators
    """

    model: ModelSpec | None = None
    preset: PresetConfig | None = None
    train: TrainConfig = Field(default_factory=TrainConfig)
    sweep_lr: bool = False
    lr_grid: tuple[float, ...] = LR_GRID
    seeds: list[int] = Field(default_factory=list)
    max_examples: int | None = Field(default=None, ge=1)
    rewire: bool = True

    @model_validator(mode="after")
    def _one_model(self) -> "TrainRunConfig":
        if (self.model is None) == (self.preset is None):
            raise ValueError("give exactly one of model / preset")
        if self.model_spec().input_window != self.train.input_window:
            raise ValueError(f"model input_window {self.model_spec().input_window} != train.input_window {self.train.input_window}")
        return self

    def model_spec(self) -> ModelSpec:
        if self.model is not None:
            return self.model
        assert self.preset is not None
        return self.preset.build()


class SensitivityConfig(_StrictConfig):
    """
    sensitivity 配置 | sensitivity configuration

    Attributes:
        dataset: Grid heat dataset the input frames come from
        seed: Dataset seed
        t_max_values: Truncation orders
        seeds: Layer initialization seeds
        kinds: Layer kinds to sweep
        hidden: Zero-padded channel width
        init_scale: Weight scale at initialization
        estimator: KL estimator between the Rayleigh-quotient distributions
    """

    dataset: GridHeatConfig = Field(default_factory=lambda: GridHeatConfig(count=200))
    seed: int = 0
    t_max_values: list[int] = Field(default_factory=lambda: list(SENSITIVITY_T_MAX))
    seeds: list[int] = Field(default_factory=lambda: list(range(10)))
    kinds: list[LayerKind] = Field(default_factory=lambda: [LayerKind.LIE_UNI])
    hidden: int = Field(default=16, ge=1)
    init_scale: float = Field(default=SENSITIVITY_INIT_SCALE, gt=0)
    estimator: KlEstimator = KlEstimator.KDE

    @field_validator("t_max_values")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if not v or any(t < 1 for t in v):
            raise ValueError(f"t_max_values must be nonempty and >= 1, got {v}")
        return v


class BoundRunConfig(_StrictConfig):
    """
    bound 配置 | bound configuration

    Attributes:
        example: Built-in target; only the unit-disk example ships
        statistic: Orbit variance statistic
        seed: Sampler seed
        n_samples: Domain samples for the empirical error
        radius_points: Radius grid size
        orbit_samples: Sphere samples per radius
        repeats: Independent bound repetitions
        fit_steps: Adam steps when fitting the unitary map
        fit_lr: Adam step size
    """

    example: Literal["unit_disk"] = "unit_disk"
    statistic: VarianceStatistic = VarianceStatistic.VECTOR
    seed: int = 0
    n_samples: int = Field(default=1_000_000, ge=2)
    radius_points: int = Field(default=200, ge=2)
    orbit_samples: int = Field(default=5000, ge=1000)
    repeats: int = Field(default=4, ge=1)
    fit_steps: int = Field(default=200, ge=1)
    fit_lr: float = Field(default=0.05, gt=0)


def load_config(cls: type[ConfigT], path: str | Path) -> ConfigT:
    """
    从 JSON 文件严格加载配置 | Strictly load a config from a JSON file

    Raises:
        MissingInputError: If the file does not exist
        ConfigError: On unknown keys or invalid values
    """
    path = require_file(path)
    try:
        return cls(config_sources=FileSource(file=path))
    except ValidationError as e:
        raise ConfigError(f"invalid {cls.__name__} in {path}", detail=str(e), path=str(path)) from e
    except RelaxUniError:
        raise
    except Exception as e:  # confz wraps parse failures in its own exception types
        raise ConfigError(f"cannot read {cls.__name__} from {path}", detail=str(e), path=str(path)) from e
