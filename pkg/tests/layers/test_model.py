# filename: test_model.py
# @Time    : 2025/11/23 16:10
# @Software: PyCharm
import numpy as np
import pytest

from relaxuni.autodiff import DEFAULT_TOLERANCE, Tape, grad_check
from relaxuni.exceptions import ArgumentError, DimensionError, LayerConfigurationError, SpecError
from relaxuni.graph import gcn_adjacency, grid_graph, normalized_adjacency
from relaxuni.layers import (
    LayerSpec,
    ModelSpec,
    build_model,
    gcn_spec,
    lie_unigraph_spec,
    parameter_count,
    r_unigraph_spec,
    r_unimesh_spec,
    sep_unigraph_spec,
)
from relaxuni.mesh import icosahedron, icosphere, mesh_operators
from relaxuni.schema import LayerKind, OperatorSource, ScalarKind


class TestLayerSpec:
    def test_unitary_layers_keep_width(self) -> None:
        with pytest.raises(SpecError):
            LayerSpec(kind=LayerKind.LIE_UNI, width_in=4, width_out=8)

    def test_sep_uni_requires_complex(self) -> None:
        with pytest.raises(LayerConfigurationError):
            LayerSpec(kind=LayerKind.SEP_UNI, width_in=4, width_out=4)

    def test_group_sort_needs_even_width(self) -> None:
        with pytest.raises(SpecError):
            LayerSpec(kind=LayerKind.GROUP_SORT, width_in=3, width_out=3)

    def test_extra_field_rejected(self) -> None:
        with pytest.raises(ValueError):
            LayerSpec(kind=LayerKind.GCN, width_in=1, width_out=1, dropout=0.1)  # type: ignore[call-arg]

    def test_complex_param_count_doubles_except_time(self) -> None:
        layer = LayerSpec(kind=LayerKind.SEP_UNI, width_in=3, width_out=3, scalar_kind=ScalarKind.COMPLEX128)
        assert layer.param_count() == 1 + 2 * 9


class TestModelSpec:
    def test_width_chain_checked(self) -> None:
        layers = [
            LayerSpec(kind=LayerKind.ZERO_PAD, width_in=1, width_out=4),
            LayerSpec(kind=LayerKind.LINEAR, width_in=8, width_out=1),
        ]
        with pytest.raises(SpecError):
            ModelSpec(layers=layers)

    def test_input_window_sets_first_width(self) -> None:
        with pytest.raises(SpecError):
            ModelSpec(layers=[LayerSpec(kind=LayerKind.LINEAR, width_in=1, width_out=1)], input_window=3)

    def test_r_unigraph_count_by_hand(self) -> None:
        # zero_pad: 0, two 16x16 free matrices, linear 16x1
        assert parameter_count(r_unigraph_spec(hidden=16, depth=2)) == 2 * 256 + 16

    def test_r_unimesh_count_by_hand(self) -> None:
        spec = r_unimesh_spec(hidden=8, depth=3, input_window=5)
        # mlp_sin hidden defaults to the input width: W1 8x8, b1 1x8, W2 8x1, b2 1x1
        assert parameter_count(spec) == 3 * 64 + (64 + 8 + 8 + 1)
        assert spec.layers[1].kind == LayerKind.TAYLOR_RELAXED
        assert r_unimesh_spec(t_max=10).layers[1].kind == LayerKind.LIE_UNI

    def test_r_unimesh_decoder_restricted(self) -> None:
        with pytest.raises(SpecError):
            r_unimesh_spec(decoder=LayerKind.LINEAR)


class TestBuildModel:
    def test_deterministic_initialization(self) -> None:
        a = build_model(r_unigraph_spec(hidden=8, depth=2, seed=4))
        b = build_model(r_unigraph_spec(hidden=8, depth=2, seed=4))
        c = build_model(r_unigraph_spec(hidden=8, depth=2, seed=5))
        np.testing.assert_array_equal(a.layer_params[1]["S"].value, b.layer_params[1]["S"].value)
        assert not np.array_equal(a.layer_params[1]["S"].value, c.layer_params[1]["S"].value)

    def test_parameter_names(self) -> None:
        model = build_model(r_unigraph_spec(hidden=8, depth=2))
        assert [name for name, _ in model.named_parameters()] == ["1.S", "2.S", "3.W"]
        assert model.parameter_count == parameter_count(model.spec)

    def test_square_gcn_weights_orthogonal(self) -> None:
        model = build_model(gcn_spec(hidden=6, depth=3))
        w = model.layer_params[1]["W"].value
        np.testing.assert_allclose(w.T @ w, np.eye(6), atol=1e-12)

    def test_sep_diffusion_time_starts_at_one(self) -> None:
        model = build_model(sep_unigraph_spec(hidden=4, depth=1))
        assert model.layer_params[1]["t"].value[0, 0] == 1.0
        assert np.iscomplexobj(model.layer_params[1]["S"].value)

    def test_empty_model_is_identity(self, rng: np.random.Generator) -> None:
        model = build_model(ModelSpec())
        x = rng.normal(size=(5, 1))
        np.testing.assert_array_equal(model.predict(x, np.eye(5)), x)


class TestModelForward:
    @pytest.mark.parametrize("factory", [r_unigraph_spec, lie_unigraph_spec, sep_unigraph_spec, gcn_spec])
    def test_predict_shape_and_real_output(self, factory, rng: np.random.Generator) -> None:  # type: ignore[no-untyped-def]
        model = build_model(factory(hidden=4, depth=2))
        g = grid_graph(3, 3)
        out = model.predict(rng.normal(size=9), model.operator(g))
        assert out.shape == (9, 1)
        assert out.dtype == np.float64

    def test_operator_sources(self) -> None:
        g = grid_graph(2, 3)
        np.testing.assert_array_equal(build_model(gcn_spec(hidden=2, depth=1)).operator(g), gcn_adjacency(g))
        np.testing.assert_array_equal(build_model(r_unigraph_spec(hidden=2, depth=1)).operator(g), normalized_adjacency(g))

    def test_mesh_model_needs_mesh_operators(self) -> None:
        model = build_model(r_unimesh_spec(hidden=4, depth=1))
        assert model.spec.operator_source == OperatorSource.MESH_WEIGHTED
        with pytest.raises(ArgumentError):
            model.operator(grid_graph(2, 2))

    def test_graph_model_rejects_mesh_operators(self) -> None:
        model = build_model(r_unigraph_spec(hidden=2, depth=1))
        with pytest.raises(ArgumentError):
            model.operator(mesh_operators(icosphere(0)))

    def test_wrong_input_width(self) -> None:
        model = build_model(r_unimesh_spec(hidden=4, depth=1, input_window=5))
        with pytest.raises(DimensionError):
            model.predict(np.ones((12, 3)), np.eye(12))

    def test_mesh_encoder_preserves_norm(self, rng: np.random.Generator) -> None:
        spec = r_unimesh_spec(hidden=8, depth=2, t_max=10, input_window=2).model_copy(update={"init_scale": 0.1})
        model = build_model(spec)
        ops = mesh_operators(icosphere(1))
        x = rng.normal(size=(ops.n, 2))
        tape = Tape()
        h = model.encode(tape, tape.constant(x), tape.constant(model.operator(ops)))
        assert np.linalg.norm(tape.value(h)) == pytest.approx(np.linalg.norm(x), rel=1e-6)


class TestFullModelGradients:
    @pytest.mark.parametrize(
        "spec",
        [
            r_unigraph_spec(hidden=4, depth=2),
            lie_unigraph_spec(hidden=4, depth=2),
            sep_unigraph_spec(hidden=4, depth=2),
            gcn_spec(hidden=4, depth=2),
        ],
        ids=lambda s: s.name,
    )
    def test_graph_stack(self, spec: ModelSpec, rng: np.random.Generator) -> None:
        g = grid_graph(2, 4)
        model = build_model(spec)
        a = model.operator(g)
        x = rng.normal(size=(g.n, spec.input_window * spec.channels))
        target = rng.normal(size=(g.n, spec.channels))

        def forward(tape: Tape) -> int:
            return tape.mse(model.forward(tape, tape.constant(x), tape.constant(a)), tape.constant(target))

        assert grad_check(forward, model.parameters()) < DEFAULT_TOLERANCE

    @pytest.mark.parametrize("decoder", [LayerKind.MLP_SIN, LayerKind.GCN_DECODER])
    def test_mesh_stack(self, decoder: LayerKind, rng: np.random.Generator) -> None:
        spec = r_unimesh_spec(hidden=4, depth=2, input_window=2, decoder=decoder)
        ops = mesh_operators(icosahedron())
        model = build_model(spec)
        a = model.operator(ops)
        x = rng.normal(size=(ops.n, 2))
        target = rng.normal(size=(ops.n, 1))

        def forward(tape: Tape) -> int:
            return tape.mse(model.forward(tape, tape.constant(x), tape.constant(a)), tape.constant(target))

        assert grad_check(forward, model.parameters()) < DEFAULT_TOLERANCE
