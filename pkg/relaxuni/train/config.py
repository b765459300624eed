# filename: config.py
# @Time    : 2025/11/19 09:10
# @Software: PyCharm
from pydantic import BaseModel, ConfigDict, Field, field_validator

__all__ = ["LR_GRID", "TrainConfig"]

LR_GRID: tuple[float, ...] = (1e-2, 1e-3, 3e-4)


class TrainConfig(BaseModel):
    """
    训练配置 | Training configuration

    Attributes:
        lr: Adam step size (0 freezes the parameters)
        betas: Adam moment decay rates
        eps: Adam denominator floor
        epochs: Passes over the training split
        batch_size: Windows per optimizer step
        bptt_rollout: Autoregressive steps backpropagated through
        input_window: Past frames stacked as input channels
        seed: Split, shuffle and initialization seed
        grad_clip: Global gradient-norm cap, None to disable
        val_fraction: Share of examples held out for validation
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    lr: float = Field(default=1e-3, ge=0, title="学习率")
    betas: tuple[float, float] = Field(default=(0.9, 0.999), title="Adam 动量系数")
    eps: float = Field(default=1e-8, gt=0)
    epochs: int = Field(default=20, ge=1, title="训练轮数")
    batch_size: int = Field(default=16, ge=1, title="批大小")
    bptt_rollout: int = Field(default=3, ge=1, title="反向传播的自回归步数")
    input_window: int = Field(default=1, ge=1, title="输入窗口帧数")
    seed: int = 0
    grad_clip: float | None = Field(default=1.0, title="全局梯度范数上限")
    val_fraction: float = Field(default=0.2, ge=0, lt=1)

    @field_validator("betas")
    @classmethod
    def _check_betas(cls, v: tuple[float, float]) -> tuple[float, float]:
        if not all(0.0 <= b < 1.0 for b in v):
            raise ValueError(f"betas must lie in [0, 1), got {v}")
        return v

    @field_validator("grad_clip")
    @classmethod
    def _check_clip(cls, v: float | None) -> float | None:
        if v is not None and v <= 0:
            raise ValueError(f"grad_clip must be > 0 or null, got {v}")
        return v
