"""
Column probes: one operator apply on a one-hot vector returns one matrix
column, whose entry magnitudes are summarized as a histogram and as the
fraction of entries below each threshold of a logarithmic grid.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from modules.logs.logger import SLQLogger
from modules.operators.base import OperatorHandle
from modules.runtime.executor import ShardExecutor
from modules.sharded.arithmetic import gather
from modules.sharded.errors import ArgumentError
from modules.sharded.layout import ShardLayout
from modules.sharded.precision import Precision
from modules.sharded.probes import ProbeSpec, draw_probe, seed_key
from modules.sharded.vector import ShardedVector

DEFAULT_THRESHOLDS: Tuple[float, ...] = tuple(float(f"1e{e}") for e in range(-12, 0))
DEFAULT_BINS = 50


@dataclass(frozen=True)
class ColumnProbeReport:
    column_index: int
    bin_edges: np.ndarray
    counts: np.ndarray
    thresholds: Tuple[float, ...]
    fractions: Tuple[float, ...]
    total_elements: int
    seed: Optional[int] = None

    @property
    def threshold_fractions(self) -> Dict[float, float]:
        return dict(zip(self.thresholds, self.fractions))


def probe_column(op: OperatorHandle, index: int, layout: ShardLayout,
                 precision: Precision = Precision.F64,
                 executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """
    Column index of the operator, as A e_index

    Raises:
        ProbeIndexError: If index is outside [0, P)
    """
    e = draw_probe(ProbeSpec.one_hot(index), layout, dtype=precision.dtype, executor=executor)
    return op(e)


def column_report(col: ShardedVector, thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
                  bins: int = DEFAULT_BINS, column_index: int = -1, seed: Optional[int] = None,
                  executor: Optional[ShardExecutor] = None) -> ColumnProbeReport:
    """
    Histogram of |entries| over [0, max |entry|] and the fraction of entries
    strictly below each threshold. An all-zero column is binned over [0, 1].
    """
    if bins < 1:
        raise ArgumentError(f"bins must be positive, got {bins}")
    thresholds = tuple(sorted(float(t) for t in thresholds))
    if not thresholds:
        raise ArgumentError("at least one threshold is required")
    magnitudes = np.abs(gather(col, executor, dtype=np.float64))
    largest = float(magnitudes.max())
    counts, edges = np.histogram(magnitudes, bins=bins, range=(0.0, largest if largest > 0 else 1.0))
    total = int(magnitudes.size)
    fractions = tuple(int(np.count_nonzero(magnitudes < t)) / total for t in thresholds)
    return ColumnProbeReport(column_index, edges, counts, thresholds, fractions, total, seed)


def draw_column_index(seed: int, dim: int) -> int:
    return int(np.random.Generator(np.random.Philox(key=seed_key(seed))).integers(dim))


def multi_seed_probe(op: OperatorHandle, seeds: Sequence[int], layout: ShardLayout,
                     precision: Precision = Precision.F64, thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
                     bins: int = DEFAULT_BINS, executor: Optional[ShardExecutor] = None,
                     logger: Optional[SLQLogger] = None) -> List[ColumnProbeReport]:
    """One uniformly drawn column per seed"""
    if not seeds:
        raise ArgumentError("at least one seed is required")
    reports = []
    for seed in seeds:
        index = draw_column_index(seed, op.dim)
        col = probe_column(op, index, layout, precision, executor)
        reports.append(column_report(col, thresholds, bins, column_index=index, seed=seed, executor=executor))
        if logger:
            logger.debug(f"column probe seed={seed} index={index}")
    return reports
