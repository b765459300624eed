# filename: params.py
# @Time    : 2025/11/17 10:05
# @Software: PyCharm
from pydantic import BaseModel, ConfigDict, Field

from relaxuni.schema import LaplacianKind, PdeKind

__all__ = ["PdeParams", "CH_DEFAULT_DT", "CH_DEFAULT_LAMBDA", "CH_DEFAULT_MOBILITY", "HEAT_DEFAULT_TAU", "MESH_DEFAULT_DT"]

HEAT_DEFAULT_TAU = 0.2
CH_DEFAULT_MOBILITY = 1.0
CH_DEFAULT_LAMBDA = 1e-2
MESH_DEFAULT_DT = 1e-3
# 显式势能项在 dt = 1e-3 时失稳 | the explicit potential term is unstable at dt = 1e-3
CH_DEFAULT_DT = 1e-4


class PdeParams(BaseModel):
    """
    PDE 参数 | PDE parameters

    Attributes:
        kind: Which equation
        tau: Graph heat diffusivity
        alpha: Mesh thermal diffusivity
        c: Wave speed
        mobility: Cahn–Hilliard mobility M
        lam: Cahn–Hilliard interface coefficient λ
        dt: Time step (mesh schemes); None picks the per-equation default, see `step_size`
        steps: Number of steps (mesh schemes)
        laplacian: Graph Laplacian kind for graph heat
    """

    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)

    kind: PdeKind = PdeKind.HEAT_MESH
    tau: float = Field(default=HEAT_DEFAULT_TAU, gt=0)
    alpha: float = Field(default=1.0, gt=0)
    c: float = Field(default=1.0, gt=0)
    mobility: float = Field(default=CH_DEFAULT_MOBILITY, gt=0)
    lam: float = Field(default=CH_DEFAULT_LAMBDA, gt=0)
    dt: float | None = Field(default=None, gt=0)
    steps: int = Field(default=200, ge=1)
    laplacian: LaplacianKind = LaplacianKind.NORMALIZED

    @property
    def step_size(self) -> float:
        if self.dt is not None:
            return self.dt
        return CH_DEFAULT_DT if self.kind == PdeKind.CAHN_HILLIARD else MESH_DEFAULT_DT
