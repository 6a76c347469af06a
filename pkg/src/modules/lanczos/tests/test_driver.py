"""Tests for the Lanczos driver"""

import numpy as np
import pytest

from modules.lanczos.classes import LanczosConfig, Reorthogonalization, TridiagonalMatrix
from modules.lanczos.driver import lanczos_run, loss_of_orthogonality, recurrence_residual
from modules.lanczos.errors import BasisUnavailableError, LanczosBreakdownError, LanczosConfigError
from modules.logs.logger import SLQLogger
from modules.operators.base import OperatorError, OperatorHandle
from modules.operators.dense import DenseSymmetric, dense_operator, diagonal_operator, identity_operator
from modules.operators.random_matrix import wigner_matrix, wigner_operator
from modules.runtime.pool import spawn_pool
from modules.sharded.errors import ArgumentError
from modules.sharded.layout import ShardLayout
from modules.sharded.precision import Precision
from modules.sharded.probes import ProbeSpec
from modules.sharded.vector import ShardedVector

FULL = Reorthogonalization.FULL


def run(op, workers=1, **cfg_kwargs):
    cfg = LanczosConfig(**cfg_kwargs)
    return lanczos_run(op, cfg, ShardLayout.even(op.dim, workers))


class TestLanczosConfig:
    def test_defaults(self):
        cfg = LanczosConfig()
        assert cfg.k_max == 10
        assert cfg.tolerance == 1e-12
        assert not cfg.store_basis
        assert LanczosConfig(precision=Precision.F32).tolerance == 1e-7

    def test_full_reorthogonalization_stores_basis(self):
        assert LanczosConfig(reorthogonalize="full").store_basis

    @pytest.mark.parametrize("kwargs", [{"k_max": 0}, {"breakdown_tol": 0.0}, {"breakdown_tol": -1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(LanczosConfigError):
            LanczosConfig(**kwargs)


class TestTridiagonalMatrix:
    def test_dense_form(self):
        t = TridiagonalMatrix((1.0, 2.0), (0.5,))
        np.testing.assert_array_equal(t.to_dense(), [[1.0, 0.5], [0.5, 2.0]])
        assert t.k == 2

    def test_beta_count_and_sign(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix((1.0, 2.0), ())
        with pytest.raises(ValueError):
            TridiagonalMatrix((1.0, 2.0), (0.0,))


class TestLanczosRun:
    """Recurrence behaviour on dense oracles"""

    def test_identity_stops_after_one_step(self):
        t, basis, diagnostics = run(identity_operator(8), workers=2)
        assert t.k == 1
        assert t.alphas[0] == pytest.approx(1.0, abs=1e-15)
        assert t.betas == ()
        assert diagnostics.terminated_early
        assert basis is None

    def test_diagonal_recovers_eigenvalues(self):
        op = diagonal_operator([1.0, 2.0, 3.0])
        layout = ShardLayout.even(3, 1)
        start = ShardedVector.from_array(np.ones(3), layout)
        t, _, _ = lanczos_run(op, LanczosConfig(k_max=3, reorthogonalize=FULL), layout, start=start)
        np.testing.assert_allclose(np.linalg.eigvalsh(t.to_dense()), [1.0, 2.0, 3.0], atol=1e-10)

    def test_exact_recovery_with_full_krylov_space(self):
        matrix = wigner_matrix(64, 1.0, seed=3)
        op = dense_operator(DenseSymmetric(matrix))
        t, _, _ = run(op, workers=4, k_max=64, reorthogonalize=FULL)
        assert t.k == 64
        np.testing.assert_allclose(np.linalg.eigvalsh(t.to_dense()), np.linalg.eigvalsh(matrix), atol=1e-8)

    def test_full_reorthogonalization_keeps_basis_orthonormal(self):
        result = run(wigner_operator(100, 1.0, seed=1), workers=3, k_max=30, reorthogonalize=FULL)
        assert loss_of_orthogonality(result.basis) <= 1e-10
        assert len(result.basis.columns) == 30
        gram = result.basis.to_matrix().T @ result.basis.to_matrix()
        assert np.abs(gram - np.eye(30)).max() <= 1e-10
        assert result.diagnostics.orthogonality[-1] <= 1e-10

    def test_recurrence_residual(self):
        op = wigner_operator(80, 1.0, seed=2)
        result = run(op, workers=2, k_max=20, reorthogonalize=FULL)
        norm = np.abs(op.eigenvalues()).max()
        assert recurrence_residual(op, result) <= 1e-8 * norm

    def test_shift_equivariance(self):
        matrix = wigner_matrix(50, 1.0, seed=4)
        base, _, _ = run(dense_operator(DenseSymmetric(matrix)), k_max=8)
        shifted, _, _ = run(dense_operator(DenseSymmetric(matrix + 3.0 * np.eye(50))), k_max=8)
        scale = np.abs(np.linalg.eigvalsh(matrix)).max()
        np.testing.assert_allclose(np.array(shifted.alphas) - 3.0, base.alphas, rtol=0, atol=1e-10 * scale)
        np.testing.assert_allclose(shifted.betas, base.betas, rtol=1e-10)

    def test_scale_equivariance(self):
        matrix = wigner_matrix(50, 1.0, seed=5)
        base, _, _ = run(dense_operator(DenseSymmetric(matrix)), k_max=8)
        scaled, _, _ = run(dense_operator(DenseSymmetric(3.0 * matrix)), k_max=8)
        scale = np.abs(np.linalg.eigvalsh(matrix)).max()
        np.testing.assert_allclose(scaled.alphas, 3.0 * np.array(base.alphas), rtol=0, atol=3e-10 * scale)
        np.testing.assert_allclose(scaled.betas, 3.0 * np.array(base.betas), rtol=1e-10)

    @pytest.mark.parametrize("workers", [2, 5, 8])
    def test_bitwise_layout_invariance(self, workers):
        op = wigner_operator(40, 1.0, seed=6)
        reference, _, _ = run(op, workers=1, k_max=12)
        t, _, _ = run(op, workers=workers, k_max=12)
        assert t.alphas == reference.alphas
        assert t.betas == reference.betas

    def test_worker_pool_matches_serial(self):
        layout = ShardLayout.even(40, 4)
        cfg = LanczosConfig(k_max=10, probe=ProbeSpec(seed=7))
        with spawn_pool(4, layout, reply_jitter=0.001) as pool:
            op = wigner_operator(40, 1.0, seed=6, executor=pool)
            pooled, _, _ = lanczos_run(op, cfg, layout, executor=pool, logger=SLQLogger(level="DEBUG"))
        serial, _, _ = lanczos_run(wigner_operator(40, 1.0, seed=6), cfg, layout)
        assert pooled == serial

    def test_diagnostics_keep_the_final_residual(self):
        t, _, diagnostics = run(wigner_operator(30, 1.0, seed=0), k_max=6)
        assert t.k == 6
        assert len(t.betas) == 5
        assert diagnostics.steps == 6
        assert list(diagnostics.betas[:5]) == list(t.betas)
        assert diagnostics.final_residual > 0
        assert len(diagnostics.apply_seconds) == 6
        assert diagnostics.orthogonality is None

    def test_float32_orthogonality_near_paige_level(self):
        op = diagonal_operator(np.linspace(1.0, 2.0, 50))
        result = run(op, workers=2, k_max=10, precision=Precision.F32, store_basis=True)
        assert result.basis.columns[0].dtype == np.float32
        assert loss_of_orthogonality(result.basis) <= 100 * 10 * Precision.F32.unit_roundoff

    def test_non_finite_apply_raises_with_partial(self):
        base = wigner_operator(10, 1.0, seed=0)
        calls = []

        def apply(x):
            calls.append(1)
            if len(calls) == 2:
                return ShardedVector(x.layout, [np.full_like(s, np.nan) for s in x.shards])
            return base(x)

        op = OperatorHandle(dim=10, apply=apply, label="flaky")
        with pytest.raises(LanczosBreakdownError) as excinfo:
            run(op, k_max=5)
        assert excinfo.value.partial.k == 1
        assert excinfo.value.partial.betas == ()
        assert excinfo.value.diagnostics.steps == 1

    def test_dimension_checks(self):
        with pytest.raises(OperatorError):
            lanczos_run(identity_operator(6), LanczosConfig(), ShardLayout.even(5, 1))
        tiny = OperatorHandle(dim=1, apply=lambda x: x, label="tiny")
        with pytest.raises(OperatorError):
            lanczos_run(tiny, LanczosConfig(), ShardLayout.even(1, 1))

    def test_zero_start_vector(self):
        layout = ShardLayout.even(4, 2)
        with pytest.raises(ArgumentError):
            lanczos_run(identity_operator(4), LanczosConfig(), layout, start=ShardedVector.zeros(layout))


class TestLossOfOrthogonality:
    def test_requires_basis(self):
        result = run(wigner_operator(20, 1.0, seed=0), k_max=4)
        with pytest.raises(BasisUnavailableError):
            loss_of_orthogonality(result.basis)
        with pytest.raises(BasisUnavailableError):
            recurrence_residual(wigner_operator(20, 1.0, seed=0), result)

    def test_single_column_is_zero(self):
        result = run(wigner_operator(20, 1.0, seed=0), k_max=1, store_basis=True)
        assert loss_of_orthogonality(result.basis) == 0.0
