"""Tests for Ritz decomposition and Gauss quadrature properties"""

import numpy as np
import pytest

from modules.lanczos.classes import LanczosConfig, Reorthogonalization, TridiagonalMatrix
from modules.lanczos.driver import lanczos_run
from modules.operators.dense import DenseSymmetric, dense_operator, diagonal_operator
from modules.operators.random_matrix import wigner_matrix
from modules.quadrature.errors import EmptySpectrumError, QuadratureError
from modules.quadrature.export import render_ritz_comparison, render_ritz_table, spectrum_csv
from modules.quadrature.ritz import RitzSpectrum, ritz_decompose
from modules.sharded.layout import ShardLayout
from modules.sharded.probes import ProbeSpec, draw_probe
from modules.sharded.vector import ShardedVector


class TestRitzDecompose:
    """Eigenpairs of small tridiagonals"""

    def test_single_entry(self):
        s = ritz_decompose(TridiagonalMatrix((2.5,), ()))
        np.testing.assert_array_equal(s.values, [2.5])
        np.testing.assert_array_equal(s.weights, [1.0])

    def test_symmetric_pair(self):
        s = ritz_decompose(TridiagonalMatrix((0.0, 0.0), (1.0,)))
        np.testing.assert_allclose(s.values, [-1.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(s.weights, [0.5, 0.5], atol=1e-15)

    def test_non_finite_rejected(self):
        with pytest.raises(QuadratureError):
            ritz_decompose(TridiagonalMatrix((np.nan, 1.0), (1.0,)))

    def test_empty_rejected(self):
        with pytest.raises(EmptySpectrumError):
            ritz_decompose(TridiagonalMatrix((), ()))

    def test_moments_on_diagonal_operator(self):
        op = diagonal_operator([1.0, 2.0, 3.0])
        layout = ShardLayout.even(3, 1)
        start = np.ones(3) / np.sqrt(3.0)
        result = lanczos_run(op, LanczosConfig(k_max=3, reorthogonalize=Reorthogonalization.FULL), layout,
                             start=ShardedVector.from_array(start, layout))
        s = ritz_decompose(result.tridiagonal)
        for m in range(6):
            assert s.moment(m) == pytest.approx(np.mean(np.array([1.0, 2.0, 3.0]) ** m), rel=1e-10)


class TestGaussQuadrature:
    """Moment matching, weight normalization and support bounds"""

    @pytest.fixture(scope="class")
    def oracle(self):
        matrix = wigner_matrix(256, 1.0, seed=8)
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
        return matrix, eigenvalues, eigenvectors

    @pytest.mark.parametrize("k", [5, 10])
    def test_moment_matching(self, oracle, k):
        matrix, eigenvalues, eigenvectors = oracle
        layout = ShardLayout.even(256, 4)
        cfg = LanczosConfig(k_max=k, reorthogonalize=Reorthogonalization.FULL, probe=ProbeSpec(seed=k))
        s = ritz_decompose(lanczos_run(dense_operator(DenseSymmetric(matrix)), cfg, layout).tridiagonal)

        q0 = draw_probe(cfg.probe, layout).to_array()
        components = (eigenvectors.T @ q0) ** 2
        for m in range(2 * k):
            exact = float(components @ eigenvalues ** m)
            magnitude = float(components @ np.abs(eigenvalues) ** m)
            assert abs(s.moment(m) - exact) <= 1e-8 * magnitude

    def test_weights_sum_to_one_and_support(self, oracle):
        matrix, eigenvalues, _ = oracle
        cfg = LanczosConfig(k_max=20, reorthogonalize=Reorthogonalization.FULL)
        s = ritz_decompose(lanczos_run(dense_operator(DenseSymmetric(matrix)), cfg,
                                       ShardLayout.even(256, 2)).tridiagonal)
        assert abs(s.weights.sum() - 1.0) <= 1e-12
        assert s.values[0] >= eigenvalues[0] - 1e-8
        assert s.values[-1] <= eigenvalues[-1] + 1e-8
        assert np.all(np.diff(s.values) >= 0)

    def test_no_reorthogonalization_weights_still_normalized(self, oracle):
        matrix, _, _ = oracle
        s = ritz_decompose(lanczos_run(dense_operator(DenseSymmetric(matrix)), LanczosConfig(k_max=25),
                                       ShardLayout.even(256, 1)).tridiagonal)
        assert abs(s.weights.sum() - 1.0) <= 1e-12


class TestRitzSpectrum:
    def test_validation(self):
        with pytest.raises(ValueError):
            RitzSpectrum(np.array([2.0, 1.0]), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            RitzSpectrum(np.array([1.0, 2.0]), np.array([1.5, -0.5]))
        with pytest.raises(EmptySpectrumError):
            RitzSpectrum(np.array([]), np.array([]))

    def test_tiny_weights_are_kept(self):
        s = RitzSpectrum(np.array([1.0, 1.0 + 1e-9]), np.array([1.0, 1e-27]))
        assert s.weights[1] == 1e-27


class TestExport:
    def test_spectrum_csv_round_trips(self):
        s = RitzSpectrum(np.array([-0.1, 1.0 / 3.0]), np.array([0.25, 0.75]))
        text = spectrum_csv(s)
        assert text.splitlines()[0] == "ritz_value,weight"
        rows = [tuple(float(v) for v in line.split(",")) for line in text.splitlines()[1:]]
        assert rows == [(-0.1, 0.25), (1.0 / 3.0, 0.75)]

    def test_ritz_table_layout(self):
        s = RitzSpectrum(np.array([1.1277e-6, 21408.2852]), np.array([1.0, 8.0098e-12]))
        assert render_ritz_table(s) == (
            "Ritz Value      Weight\n"
            "----------  ----------\n"
            "1.1277e-06      1.0000\n"
            "21408.2852  8.0098e-12\n"
        )

    def test_side_by_side_tables(self):
        left = RitzSpectrum(np.array([1.0]), np.array([1.0]))
        right = RitzSpectrum(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        lines = render_ritz_comparison(left, right, "A", "B").splitlines()
        assert lines == [
            "A" + " " * 21 + "B",
            "Ritz Value  Weight    Ritz Value  Weight",
            "----------  ------    ----------  ------",
            "    1.0000  1.0000        1.0000  0.5000",
            " " * 26 + "2.0000  0.5000",
        ]
