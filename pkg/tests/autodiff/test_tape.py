# filename: test_tape.py
# @Time    : 2025/11/23 09:45
# @Software: PyCharm
"""
磁带前向值、反向梯度与错误路径 | Tape forward values, backward gradients and error paths
"""

import numpy as np
import pytest

from relaxuni.autodiff import DEFAULT_TOLERANCE, Param, Tape, grad_check
from relaxuni.exceptions import ArgumentError, ContractError, DimensionError, LayerConfigurationError
from relaxuni.linalg import mat_exp_taylor


class TestForward:
    def test_truncated_exp_operator_matches_kronecker_form(self, rng: np.random.Generator, random_complex) -> None:
        a = 0.3 * rng.normal(size=(5, 5))
        a = (a + a.T) / 2
        x = random_complex(5, 3)
        w = 0.4 * random_complex(3, 3)
        tape = Tape()
        out = tape.truncated_exp_operator(tape.constant(a), tape.constant(x), tape.constant(w), 4)
        # vec(A X W) = (Wᵀ ⊗ A) vec(X) with column-major vec
        expected = mat_exp_taylor(np.kron(w.T, a), 4) @ x.reshape(-1, order="F")
        np.testing.assert_allclose(tape.value(out).reshape(-1, order="F"), expected, atol=1e-12)

    def test_truncated_exp_operator_order_zero_is_identity(self, rng: np.random.Generator) -> None:
        tape = Tape()
        x = rng.normal(size=(4, 2))
        out = tape.truncated_exp_operator(tape.constant(np.eye(4)), tape.constant(x), tape.constant(np.eye(2)), 0)
        np.testing.assert_array_equal(tape.value(out), x)

    def test_group_sort_orders_pairs(self) -> None:
        tape = Tape()
        out = tape.group_sort(tape.constant([[3.0, 1.0, -2.0, 5.0]]))
        np.testing.assert_array_equal(tape.value(out), [[1.0, 3.0, -2.0, 5.0]])

    def test_zero_pad(self) -> None:
        tape = Tape()
        out = tape.zero_pad(tape.constant([[1.0, 2.0]]), 4)
        np.testing.assert_array_equal(tape.value(out), [[1.0, 2.0, 0.0, 0.0]])

    def test_param_leaf_shared(self) -> None:
        p = Param("w", np.eye(2))
        tape = Tape()
        assert tape.param(p) == tape.param(p)
        assert len(tape) == 1


class TestBackward:
    def test_reused_param_accumulates(self, rng: np.random.Generator) -> None:
        w = Param("w", rng.normal(size=(3, 3)))
        x = rng.normal(size=(4, 3))
        target = rng.normal(size=(4, 3))

        def forward(tape: Tape) -> int:
            wn = tape.param(w)
            h = tape.matmul(tape.matmul(tape.constant(x), wn), wn)
            return tape.mse(h, tape.constant(target))

        assert grad_check(forward, [w]) < DEFAULT_TOLERANCE

    def test_complex_truncated_exp_gradients(self, rng: np.random.Generator, random_complex) -> None:
        a = rng.normal(size=(4, 4))
        a = 0.2 * (a + a.T)
        x = Param("x", random_complex(4, 2))
        w = Param("w", 0.3 * random_complex(2, 2))
        target = random_complex(4, 2)

        def forward(tape: Tape) -> int:
            y = tape.truncated_exp_operator(tape.constant(a), tape.param(x), tape.param(w), 3)
            return tape.mse(y, tape.constant(target))

        assert grad_check(forward, [x, w]) < DEFAULT_TOLERANCE

    def test_nonlinear_chain_gradients(self, rng: np.random.Generator) -> None:
        w = Param("w", rng.normal(size=(4, 4)))
        x = rng.normal(size=(5, 4))
        target = rng.normal(size=(5, 4))

        def forward(tape: Tape) -> int:
            h = tape.group_sort(tape.matmul(tape.constant(x), tape.param(w)))
            h = tape.sin(tape.relu(h))
            return tape.mse(h, tape.constant(target))

        assert grad_check(forward, [w]) < DEFAULT_TOLERANCE

    def test_slice_concat_gradients(self, rng: np.random.Generator, random_complex) -> None:
        x = Param("x", random_complex(3, 4))
        target = random_complex(3, 4)

        def forward(tape: Tape) -> int:
            xn = tape.param(x)
            left = tape.slice_columns(xn, 0, 2)
            right = tape.transpose_conj(tape.transpose_conj(tape.slice_columns(xn, 2, 4)))
            return tape.mse(tape.concat_columns(right, tape.hadamard(left, left)), tape.constant(target))

        assert grad_check(forward, [x]) < DEFAULT_TOLERANCE

    def test_mse_gradient_convention(self) -> None:
        # G = ∂L/∂Re + i ∂L/∂Im
        p = Param("p", np.array([[1.0 + 2.0j]]))

        tape = Tape()
        tape.backward(tape.mse(tape.param(p), tape.constant([[0.0 + 0.0j]])))
        assert p.grad[0, 0] == pytest.approx(2.0 + 4.0j)

    def test_non_scalar_loss_rejected(self) -> None:
        tape = Tape()
        with pytest.raises(ContractError):
            tape.backward(tape.constant(np.ones((2, 2))))


class TestErrors:
    def test_shape_mismatch_reports_node_id(self) -> None:
        tape = Tape()
        a = tape.constant(np.ones((2, 3)))
        b = tape.constant(np.ones((2, 3)))
        with pytest.raises(DimensionError) as exc:
            tape.matmul(a, b)
        assert exc.value.context["node_id"] == 2

    def test_unknown_op(self) -> None:
        with pytest.raises(ArgumentError):
            Tape().record("softmax", ())

    def test_relu_real_only(self) -> None:
        tape = Tape()
        with pytest.raises(LayerConfigurationError):
            tape.relu(tape.constant([[1j]]))

    def test_group_sort_odd_width(self) -> None:
        tape = Tape()
        with pytest.raises(DimensionError):
            tape.group_sort(tape.constant(np.ones((2, 3))))

    def test_zero_pad_cannot_shrink(self) -> None:
        tape = Tape()
        with pytest.raises(ArgumentError):
            tape.zero_pad(tape.constant(np.ones((2, 3))), 2)
