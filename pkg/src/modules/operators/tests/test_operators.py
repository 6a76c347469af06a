"""Tests for dense, random-matrix and Hessian operators"""

import numpy as np
import pytest
from scipy.integrate import trapezoid

from modules.autodiff.data import split_batches, synthetic_samples
from modules.autodiff.models import Model, ModelSpec
from modules.operators.base import OperatorError, check_symmetry
from modules.operators.dense import (DenseSymmetric, dense_operator, diagonal_operator, identity_operator,
                                     load_dense_file)
from modules.operators.hessian import hessian_operator
from modules.operators.random_matrix import (semicircle_density, semicircle_radius, spiked_operator,
                                             wigner_matrix, wigner_operator)
from modules.runtime.pool import spawn_pool
from modules.sharded.layout import ShardLayout
from modules.sharded.vector import ShardedVector


class TestDenseOperator:
    """Dense oracle operators"""

    def test_apply_matches_matmul(self):
        matrix = wigner_matrix(12, 1.0, seed=2)
        op = dense_operator(DenseSymmetric(matrix))
        x = np.random.default_rng(0).normal(size=12)
        result = op(ShardedVector.from_array(x, ShardLayout.even(12, 3)))
        np.testing.assert_array_equal(result.to_array(), matrix @ x)

    def test_apply_is_layout_invariant(self):
        op = wigner_operator(20, 1.0, seed=1)
        x = np.random.default_rng(1).normal(size=20)
        one = op(ShardedVector.from_array(x, ShardLayout.even(20, 1))).to_array()
        eight = op(ShardedVector.from_array(x, ShardLayout.even(20, 8))).to_array()
        np.testing.assert_array_equal(one, eight)

    def test_keeps_vector_precision(self):
        op = identity_operator(6)
        y = op(ShardedVector.from_array(np.arange(6.0), ShardLayout.even(6, 2), np.float32))
        assert y.dtype == np.float32
        np.testing.assert_array_equal(y.to_array(), np.arange(6.0))

    def test_dimension_mismatch(self):
        with pytest.raises(OperatorError):
            identity_operator(5)(ShardedVector.zeros(ShardLayout.even(4, 2)))

    def test_asymmetric_rejected(self):
        with pytest.raises(OperatorError, match="not symmetric"):
            DenseSymmetric(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]))

    def test_cap_enforced(self):
        with pytest.raises(OperatorError):
            DenseSymmetric(np.eye(10), cap=8)

    def test_diagonal_eigenvalues(self):
        op = diagonal_operator([3.0, -1.0, 2.0])
        np.testing.assert_array_equal(op.eigenvalues(), [-1.0, 2.0, 3.0])

    def test_symmetry_check(self):
        op = wigner_operator(30, 1.0, seed=0)
        assert check_symmetry(op, ShardLayout.even(30, 3)) < 1e-14


class TestDenseFile:
    """Reading operator files"""

    def test_load(self, tmp_path):
        path = tmp_path / "op.txt"
        path.write_text("# small operator\ndim 2\n1 2\n2 5\n")
        m = load_dense_file(path)
        np.testing.assert_array_equal(m.entries, [[1.0, 2.0], [2.0, 5.0]])

    @pytest.mark.parametrize("content", [
        "",
        "size 2\n1 0\n0 1\n",
        "dim 2\n1 0\n",
        "dim 2\n1 0 0\n0 1\n",
        "dim 2\n1 3\n2 1\n",
        "dim 2\n1 x\nx 1\n",
    ])
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "op.txt"
        path.write_text(content)
        with pytest.raises(OperatorError):
            load_dense_file(path)


class TestRandomMatrix:
    """Wigner and spiked models"""

    def test_wigner_is_symmetric_and_seeded(self):
        a = wigner_matrix(16, 1.0, seed=5)
        np.testing.assert_array_equal(a, a.T)
        np.testing.assert_array_equal(a, wigner_matrix(16, 1.0, seed=5))

    def test_wigner_spectrum_inside_semicircle(self):
        op = wigner_operator(200, 1.0, seed=0)
        eigenvalues = op.eigenvalues()
        radius = semicircle_radius(200, 1.0)
        assert np.abs(eigenvalues).max() < 1.1 * radius

    def test_wigner_edges_reach_the_semicircle(self):
        n = 256
        eigenvalues = wigner_operator(n, 1.0, seed=3).eigenvalues()
        assert eigenvalues[-1] >= 1.9 * np.sqrt(n)
        assert eigenvalues[0] <= -1.9 * np.sqrt(n)

    def test_no_spikes_is_plain_wigner(self):
        spiked = spiked_operator(40, 1.0, [], seed=7)
        np.testing.assert_array_equal(spiked.matrix, wigner_operator(40, 1.0, seed=7).matrix)
        x = ShardedVector.from_array(np.random.default_rng(4).normal(size=40), ShardLayout.even(40, 3))
        np.testing.assert_array_equal(spiked(x).to_array(), wigner_operator(40, 1.0, seed=7)(x).to_array())

    def test_spikes_appear_as_outliers(self):
        op = spiked_operator(100, 1.0, [200.0, -150.0], seed=0)
        eigenvalues = op.eigenvalues()
        assert eigenvalues[-1] == pytest.approx(200.0, rel=0.02)
        assert eigenvalues[0] == pytest.approx(-150.0, rel=0.02)

    def test_semicircle_density_integrates_to_one(self):
        radius = semicircle_radius(64, 0.5)
        grid = np.linspace(-radius, radius, 20001)
        assert trapezoid(semicircle_density(grid, 64, 0.5), grid) == pytest.approx(1.0, abs=1e-4)
        assert semicircle_density(np.array([radius * 1.5]), 64, 0.5)[0] == 0.0

    def test_invalid_sizes(self):
        with pytest.raises(OperatorError):
            wigner_matrix(1, 1.0, seed=0)
        with pytest.raises(OperatorError):
            wigner_matrix(4, 0.0, seed=0)
        with pytest.raises(OperatorError):
            spiked_operator(2, 1.0, [1.0, 2.0], seed=0)


class TestLinearity:
    """Every operator kind acts linearly on sharded vectors"""

    @pytest.fixture(params=["wigner", "spiked", "diagonal", "hessian"])
    def op(self, request):
        if request.param == "wigner":
            return wigner_operator(21, 1.0, seed=2)
        if request.param == "spiked":
            return spiked_operator(21, 1.0, [30.0], seed=2)
        if request.param == "diagonal":
            return diagonal_operator(np.linspace(-3.0, 3.0, 21))
        spec = ModelSpec(layer_widths=(3, 4, 1))
        return hessian_operator(Model.initialize(spec, seed=0), split_batches(synthetic_samples(spec, 8, seed=1), 3))

    def test_combination(self, op):
        layout = ShardLayout.even(op.dim, 3)
        rng = np.random.default_rng(6)
        x, y = rng.normal(size=op.dim), rng.normal(size=op.dim)
        alpha, beta = -2.5, 0.75

        def apply(v):
            return op(ShardedVector.from_array(v, layout)).to_array()

        combined = alpha * apply(x) + beta * apply(y)
        np.testing.assert_allclose(apply(alpha * x + beta * y), combined, rtol=0,
                                   atol=1e-10 * np.max(np.abs(combined)))


class TestHessianOperator:
    """Hessian of a small model as a matrix-free operator"""

    @pytest.fixture
    def setup(self):
        spec = ModelSpec(layer_widths=(3, 4, 1))
        model = Model.initialize(spec, seed=0)
        batches = split_batches(synthetic_samples(spec, 12, seed=1), 5)
        return model, batches

    def test_dimension_and_symmetry(self, setup):
        model, batches = setup
        layout = ShardLayout.even(model.parameter_count, 3)
        op = hessian_operator(model, batches)
        assert op.dim == model.parameter_count == 21
        assert check_symmetry(op, layout, trials=4) < 1e-10

    def test_pool_matches_serial(self, setup):
        model, batches = setup
        layout = ShardLayout.even(model.parameter_count, 4)
        x = ShardedVector.from_array(np.random.default_rng(2).normal(size=21), layout)
        serial = hessian_operator(model, batches)(x).to_array()
        with spawn_pool(4, layout) as pool:
            pooled = hessian_operator(model, batches, pool)(x).to_array()
        np.testing.assert_array_equal(pooled, serial)
