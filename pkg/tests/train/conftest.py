# filename: conftest.py
# @Time    : 2025/11/24 09:00
# @Software: PyCharm
import pytest

from relaxuni.dynamics import GridHeatConfig, HeatSample, gen_heat_grid_dataset


@pytest.fixture(scope="module")
def heat_samples() -> list[HeatSample]:
    cfg = GridHeatConfig(count=12, sources=3, side_mean=5.0, side_std=0.0, min_side=4)
    return gen_heat_grid_dataset(cfg, seed=3, threads=2)
