"""Tests for column probes and threshold reports"""

import numpy as np
import pytest

from modules.autodiff.data import synthetic_samples
from modules.autodiff.hvp import loss_gradient
from modules.autodiff.models import Model, ModelSpec
from modules.column_probe.probe import (DEFAULT_THRESHOLDS, ColumnProbeReport, column_report,
                                        draw_column_index, multi_seed_probe, probe_column)
from modules.column_probe.render import (fractions_csv, histogram_csv, render_seed_table,
                                         render_threshold_table)
from modules.operators.dense import DenseSymmetric, dense_operator, diagonal_operator, identity_operator
from modules.operators.hessian import hessian_operator
from modules.operators.random_matrix import wigner_matrix
from modules.sharded.errors import ArgumentError, ProbeIndexError
from modules.sharded.layout import ShardLayout
from modules.sharded.vector import ShardedVector


def report_with(fractions, total=1000):
    return ColumnProbeReport(column_index=7, bin_edges=np.linspace(0, 1, 51), counts=np.zeros(50, dtype=int),
                             thresholds=DEFAULT_THRESHOLDS, fractions=tuple(fractions), total_elements=total)


class TestProbeColumn:
    """One-hot applies return exact columns"""

    def test_diagonal(self):
        col = probe_column(diagonal_operator([1.0, 2.0, 3.0]), 1, ShardLayout.even(3, 2))
        np.testing.assert_array_equal(col.to_array(), [0.0, 2.0, 0.0])

    def test_dense_column_is_exact(self):
        matrix = wigner_matrix(64, 1.0, seed=1)
        op = dense_operator(DenseSymmetric(matrix))
        for index in (0, 17, 63):
            col = probe_column(op, index, ShardLayout.even(64, 5))
            np.testing.assert_array_equal(col.to_array(), matrix[:, index])

    def test_out_of_range(self):
        with pytest.raises(ProbeIndexError):
            probe_column(identity_operator(4), 4, ShardLayout.even(4, 1))

    def test_hessian_column_matches_finite_differences(self):
        spec = ModelSpec(layer_widths=(4, 8, 1))
        model = Model.initialize(spec, seed=0)
        batch = synthetic_samples(spec, 16, seed=0)
        op = hessian_operator(model, [batch])
        layout = ShardLayout.even(spec.parameter_count, 3)
        index = 5
        col = probe_column(op, index, layout).to_array()

        eps = 1e-4
        up, down = model.weights.copy(), model.weights.copy()
        up[index] += eps
        down[index] -= eps
        numeric = (loss_gradient(Model(spec, up), batch) - loss_gradient(Model(spec, down), batch)) / (2 * eps)
        assert np.max(np.abs(col - numeric)) / np.max(np.abs(numeric)) < 1e-5

    def test_entry_level_symmetry(self):
        spec = ModelSpec(layer_widths=(3, 4, 1))
        model = Model.initialize(spec, seed=1)
        op = hessian_operator(model, [synthetic_samples(spec, 8, seed=1)])
        layout = ShardLayout.even(spec.parameter_count, 2)
        i, j = 2, 15
        assert probe_column(op, i, layout).to_array()[j] == pytest.approx(
            probe_column(op, j, layout).to_array()[i], abs=1e-8)


class TestColumnReport:
    """Histogram and threshold fractions"""

    def test_fractions_strictly_below(self):
        layout = ShardLayout.even(3, 1)
        report = column_report(ShardedVector.from_array(np.array([0.0, 0.0, 1.0]), layout), thresholds=[1e-1, 10.0])
        assert report.fractions == (2 / 3, 1.0)
        assert report.threshold_fractions[1e-1] == 2 / 3
        assert report.total_elements == 3
        assert report.counts.sum() == 3
        assert report.bin_edges[-1] == 1.0

    def test_monotone_and_layout_invariant(self):
        values = np.random.default_rng(0).normal(size=200) * np.logspace(-14, 0, 200)
        first = column_report(ShardedVector.from_array(values, ShardLayout.even(200, 1)))
        second = column_report(ShardedVector.from_array(values, ShardLayout.even(200, 7)))
        assert all(a <= b for a, b in zip(first.fractions, first.fractions[1:]))
        assert first.fractions == second.fractions
        np.testing.assert_array_equal(first.counts, second.counts)
        assert len(first.counts) == 50

    def test_all_zero_column(self):
        report = column_report(ShardedVector.zeros(ShardLayout.even(10, 2)))
        assert report.counts[0] == 10
        assert report.counts[1:].sum() == 0
        assert report.bin_edges[-1] == 1.0
        assert set(report.fractions) == {1.0}

    def test_invalid_arguments(self):
        col = ShardedVector.zeros(ShardLayout.even(4, 1))
        with pytest.raises(ArgumentError):
            column_report(col, bins=0)
        with pytest.raises(ArgumentError):
            column_report(col, thresholds=[])


class TestMultiSeedProbe:
    def test_one_report_per_seed(self):
        op = dense_operator(DenseSymmetric(wigner_matrix(50, 1.0, seed=0)))
        reports = multi_seed_probe(op, [1, 2, 3, 4, 5], ShardLayout.even(50, 2))
        assert [r.seed for r in reports] == [1, 2, 3, 4, 5]
        assert [r.column_index for r in reports] == [draw_column_index(s, 50) for s in [1, 2, 3, 4, 5]]

    def test_negative_seeds(self):
        reports = multi_seed_probe(identity_operator(30), [-3, -1], ShardLayout.even(30, 2))
        assert [r.seed for r in reports] == [-3, -1]
        for report in reports:
            assert 0 <= report.column_index < 30
            assert report.column_index == draw_column_index(report.seed, 30)
        assert draw_column_index(-3, 30) == draw_column_index((1 << 64) - 3, 30)

    def test_toy_model_fractions_monotone(self):
        spec = ModelSpec(layer_widths=(4, 8, 1))
        op = hessian_operator(Model.initialize(spec, seed=0), [synthetic_samples(spec, 10, seed=0)])
        for report in multi_seed_probe(op, [0, 1, 2], ShardLayout.even(spec.parameter_count, 3)):
            assert all(a <= b for a, b in zip(report.fractions, report.fractions[1:]))

    def test_identity_fraction(self):
        reports = multi_seed_probe(identity_operator(20), [9], ShardLayout.even(20, 1))
        assert reports[0].threshold_fractions[1e-1] == 19 / 20

    def test_requires_seeds(self):
        with pytest.raises(ArgumentError):
            multi_seed_probe(identity_operator(4), [], ShardLayout.even(4, 1))


class TestRender:
    """Threshold table layout"""

    QWEN_ROW = [0.0343, 0.0986, 0.3019, 0.7621, 0.9838, 0.9999] + [1.0] * 6

    def test_threshold_table(self):
        text = render_threshold_table(report_with(self.QWEN_ROW, total=5120))
        assert text == (
            "Threshold   Fraction\n"
            "1e-12         0.0343\n"
            "1e-11         0.0986\n"
            "1e-10         0.3019\n"
            "1e-9          0.7621\n"
            "1e-8          0.9838\n"
            "1e-7          0.9999\n"
            "1e-6..1e-1    1.0000\n"
            "Total elems = 5120\n"
        )

    def test_seed_table(self):
        reports = [report_with(self.QWEN_ROW), report_with([0.5] * 11 + [1.0])]
        lines = render_seed_table(reports).splitlines()
        assert lines[0].split() == ["Thres.", "F1", "F2"]
        assert lines[1].split() == ["Idx", "7", "7"]
        assert lines[2].split() == ["1e-12", "0.0343", "0.5000"]
        assert len(lines) == 2 + 12 + 1

    def test_csv_exports(self):
        report = column_report(ShardedVector.from_array(np.array([0.5, 1.0]), ShardLayout.even(2, 1)),
                               thresholds=[1.0], bins=2)
        assert fractions_csv(report) == "threshold,fraction\n1.0,0.5\n"
        assert histogram_csv(report) == "bin_left,bin_right,count\n0.0,0.5,0\n0.5,1.0,2\n"
