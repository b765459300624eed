# filename: test_optim.py
# @Time    : 2025/11/24 09:20
# @Software: PyCharm
import numpy as np
import pytest

from relaxuni.autodiff import Param
from relaxuni.exceptions import ArgumentError, NumericalError
from relaxuni.train import AdamState, adam_step, clip_grad_norm, global_grad_norm


class TestAdam:
    def test_first_step_moves_by_lr_per_entry(self) -> None:
        p = Param("w", np.array([[1.0, -2.0, 3.0]]))
        p.grad = np.array([[0.5, -4.0, 1e-3]])
        adam_step([p], None, AdamState(), lr=0.1)
        assert p.value == pytest.approx(np.array([[0.9, -1.9, 2.9]]), abs=1e-4)

    def test_converges_on_quadratic(self) -> None:
        target = np.array([[1.0, -3.0], [0.5, 2.0]])
        p = Param("w", np.zeros((2, 2)))
        state = AdamState()
        start = np.linalg.norm(p.value - target)
        for _ in range(400):
            p.grad = 2.0 * (p.value - target)
            adam_step([p], None, state, lr=0.05)
        assert state.step == 400
        assert np.linalg.norm(p.value - target) < 0.1 * start

    def test_complex_parameter_moves_towards_minimum(self) -> None:
        target = np.array([[1.0 - 2.0j]])
        p = Param("z", np.zeros((1, 1), dtype=np.complex128))
        state = AdamState()
        for _ in range(300):
            p.grad = 2.0 * (p.value - target)
            adam_step([p], None, state, lr=0.05)
        assert np.iscomplexobj(p.value)
        assert abs(p.value[0, 0] - target[0, 0]) < 0.2

    def test_explicit_gradients_override_param_grad(self) -> None:
        p = Param("w", np.zeros((1, 1)))
        p.grad = np.ones((1, 1))
        adam_step([p], [-np.ones((1, 1))], AdamState(), lr=0.1)
        assert p.value[0, 0] > 0

    def test_zero_lr_freezes(self) -> None:
        p = Param("w", np.ones((2, 2)))
        p.grad = np.ones((2, 2))
        adam_step([p], None, AdamState(), lr=0.0)
        assert np.array_equal(p.value, np.ones((2, 2)))

    def test_non_finite_gradient_names_parameter(self) -> None:
        p = Param("layer.S", np.zeros((1, 2)))
        p.grad = np.array([[np.nan, 0.0]])
        with pytest.raises(NumericalError) as exc_info:
            adam_step([p], None, AdamState(), lr=0.1)
        assert exc_info.value.context["param"] == "layer.S"

    def test_mismatched_gradient_list(self) -> None:
        with pytest.raises(ArgumentError):
            adam_step([Param("a", np.zeros((1, 1)))], [], AdamState(), lr=0.1)

    def test_negative_lr_rejected(self) -> None:
        with pytest.raises(ArgumentError):
            adam_step([], None, AdamState(), lr=-1.0)


class TestClipping:
    def test_global_norm_spans_parameters(self) -> None:
        a, b = Param("a", np.zeros((1, 1))), Param("b", np.zeros((1, 1), dtype=np.complex128))
        a.grad = np.array([[3.0]])
        b.grad = np.array([[4.0j]])
        assert global_grad_norm([a, b]) == pytest.approx(5.0)

    def test_clip_rescales_to_max_norm(self) -> None:
        a, b = Param("a", np.zeros((1, 1))), Param("b", np.zeros((1, 1)))
        a.grad, b.grad = np.array([[3.0]]), np.array([[4.0]])
        before = clip_grad_norm([a, b], max_norm=1.0)
        assert before == pytest.approx(5.0)
        assert global_grad_norm([a, b]) == pytest.approx(1.0)
        assert a.grad[0, 0] / b.grad[0, 0] == pytest.approx(0.75)

    def test_small_gradients_untouched(self) -> None:
        a = Param("a", np.zeros((1, 2)))
        a.grad = np.array([[0.1, 0.2]])
        clip_grad_norm([a], max_norm=1.0)
        assert np.array_equal(a.grad, np.array([[0.1, 0.2]]))
