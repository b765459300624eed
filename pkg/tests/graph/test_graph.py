# filename: test_graph.py
# @Time    : 2025/11/23 10:05
# @Software: PyCharm
import json

import numpy as np
import pytest

from relaxuni.exceptions import ArgumentError, FormatError, MissingInputError
from relaxuni.graph import (
    Graph,
    gcn_adjacency,
    graph_from_json,
    grid_graph,
    laplacian,
    load_graph,
    normalized_adjacency,
    random_connected_graph,
    save_graph,
)
from relaxuni.schema import LaplacianKind


class TestGraph:
    def test_from_edges_reorients_and_sorts(self) -> None:
        g = Graph.from_edges(3, [(2, 0), (1, 0)])
        assert g.edges == ((0, 1), (0, 2))
        np.testing.assert_array_equal(g.degrees, [2.0, 1.0, 1.0])

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(0, 1), (1, 0)]])
    def test_invalid_edges(self, edges: list[tuple[int, int]]) -> None:
        with pytest.raises(ArgumentError):
            Graph.from_edges(3, edges)

    def test_non_positive_weight(self) -> None:
        with pytest.raises(ArgumentError):
            Graph.from_edges(2, [(0, 1)], weights=[0.0])

    def test_grid_shape(self) -> None:
        g = grid_graph(3, 4)
        assert g.n == 12
        assert len(g.edges) == 3 * 3 + 2 * 4
        assert g.degrees.max() == 4

    def test_random_connected_has_no_isolated_nodes(self) -> None:
        g = random_connected_graph(30, 0.0, np.random.default_rng(3))
        assert len(g.edges) == 29
        assert g.isolated_nodes() == []


class TestOperators:
    def test_normalized_adjacency_symmetric_spectrum(self) -> None:
        a = normalized_adjacency(grid_graph(4, 4))
        np.testing.assert_allclose(a, a.T)
        eig = np.linalg.eigvalsh(a)
        assert eig.max() == pytest.approx(1.0)
        assert eig.min() >= -1.0 - 1e-12

    def test_laplacian_kinds(self) -> None:
        g = grid_graph(2, 3)
        np.testing.assert_allclose(laplacian(g), np.eye(6) - normalized_adjacency(g))
        np.testing.assert_allclose(laplacian(g, LaplacianKind.COMBINATORIAL).sum(axis=1), np.zeros(6), atol=1e-12)

    def test_gcn_adjacency_handles_isolated_nodes(self) -> None:
        a = gcn_adjacency(Graph.from_edges(3, [(0, 1)]))
        assert a[2, 2] == pytest.approx(1.0)
        assert a[0, 1] == pytest.approx(0.5)


class TestGraphIO:
    def test_save_and_load(self, tmp_path) -> None:
        g = Graph.from_edges(3, [(0, 1), (1, 2)], weights=[0.5, 2.0])
        loaded = load_graph(save_graph(g, tmp_path / "g.json"))
        assert loaded == g

    def test_unknown_field_rejected(self) -> None:
        with pytest.raises(FormatError):
            graph_from_json({"n": 2, "edges": [[0, 1]], "directed": True})

    def test_missing_file(self, tmp_path) -> None:
        with pytest.raises(MissingInputError) as exc:
            load_graph(tmp_path / "nope.json")
        assert exc.value.exit_code == 3

    def test_unweighted_document_omits_weights(self, tmp_path) -> None:
        path = save_graph(grid_graph(1, 2), tmp_path / "g.json")
        assert json.loads(path.read_text()) == {"edges": [[0, 1]], "n": 2}
