# filename: test_rayleigh.py
# @Time    : 2025/11/23 10:20
# @Software: PyCharm
import numpy as np
import pytest

from relaxuni.exceptions import DegreeError, DimensionError, UndefinedQuotientError
from relaxuni.graph import (
    Graph,
    complete_graph,
    cycle_graph,
    grid_graph,
    random_connected_graph,
    rayleigh_quotient,
    rayleigh_quotient_edge_form,
    star_graph,
)
from relaxuni.linalg import unitary_from_free


class TestRayleighQuotient:
    def test_single_edge_alternating(self) -> None:
        assert rayleigh_quotient(Graph.from_edges(2, [(0, 1)]), [1.0, -1.0]) == pytest.approx(2.0)

    def test_constant_on_regular_graph_is_zero(self) -> None:
        assert rayleigh_quotient(cycle_graph(8), np.ones(8)) == pytest.approx(0.0, abs=1e-12)

    def test_sqrt_degree_signal_is_zero(self) -> None:
        g = star_graph(5)
        assert rayleigh_quotient(g, np.sqrt(g.degrees)) == pytest.approx(0.0, abs=1e-12)

    def test_bipartite_alternating_is_two(self) -> None:
        g = grid_graph(4, 5)
        signs = np.array([(-1.0) ** (r + c) for r in range(4) for c in range(5)])
        assert rayleigh_quotient(g, signs * np.sqrt(g.degrees)) == pytest.approx(2.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_range(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        g = random_connected_graph(15, 0.2, rng)
        value = rayleigh_quotient(g, rng.normal(size=(15, 3)))
        assert 0.0 <= value <= 2.0

    @pytest.mark.parametrize("seed", range(10))
    def test_edge_form_matches_trace_form(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        g = random_connected_graph(12, 0.3, rng)
        x = rng.normal(size=(12, 4)) + 1j * rng.normal(size=(12, 4))
        assert rayleigh_quotient_edge_form(g, x) == pytest.approx(rayleigh_quotient(g, x), abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_invariant_under_channel_unitary(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        g = random_connected_graph(20, 0.15, rng)
        x = rng.normal(size=(20, 4)) + 1j * rng.normal(size=(20, 4))
        u = unitary_from_free(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        assert abs(rayleigh_quotient(g, x @ u) - rayleigh_quotient(g, x)) < 1e-10

    def test_scale_invariant(self, rng: np.random.Generator) -> None:
        g = complete_graph(6)
        x = rng.normal(size=(6, 2))
        assert rayleigh_quotient(g, 7.5 * x) == pytest.approx(rayleigh_quotient(g, x), abs=1e-12)


class TestRayleighErrors:
    def test_zero_features(self) -> None:
        with pytest.raises(UndefinedQuotientError):
            rayleigh_quotient(cycle_graph(4), np.zeros(4))

    def test_isolated_node_named(self) -> None:
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(DegreeError) as exc:
            rayleigh_quotient(g, [1.0, 2.0, 3.0])
        assert exc.value.context["node"] == 2
        with pytest.raises(DegreeError):
            rayleigh_quotient_edge_form(g, [1.0, 2.0, 3.0])

    def test_row_mismatch(self) -> None:
        with pytest.raises(DimensionError):
            rayleigh_quotient(cycle_graph(4), np.ones(5))
