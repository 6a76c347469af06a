"""
Deterministic arithmetic on sharded vectors.

Elementwise work runs per shard through an executor (inline or on the worker
pool); reductions are combined by the coordinator in ascending shard order and
always in f64, so every result is independent of the shard count.
"""
import math
from typing import Optional

import numpy as np

from modules.runtime.executor import ShardExecutor, default_executor
from modules.runtime.messages import MessageKind
from modules.runtime.reduction import reduce_ordered
from . import kernels
from .errors import ArgumentError, LayoutError
from .layout import ShardLayout
from .vector import ShardedVector


def _check_pair(a: ShardedVector, b: ShardedVector) -> None:
    if a.layout != b.layout:
        raise LayoutError(f"layout mismatch: {a.layout.shard_bounds} vs {b.layout.shard_bounds}")
    if a.dtype != b.dtype:
        raise LayoutError(f"precision mismatch: {a.dtype} vs {b.dtype}")


def dot(a: ShardedVector, b: ShardedVector, executor: Optional[ShardExecutor] = None) -> float:
    """Inner product; per-shard products reduced in ascending shard order"""
    _check_pair(a, b)
    executor = executor or default_executor()
    partials = executor.map_shards(MessageKind.DOT_PARTIAL, kernels.dot_partial,
                                   list(zip(a.shards, b.shards)))
    return reduce_ordered(partials, expected=a.layout.worker_count)


def norm2(x: ShardedVector, executor: Optional[ShardExecutor] = None) -> float:
    return math.sqrt(dot(x, x, executor))


def axpy(alpha: float, x: ShardedVector, y: ShardedVector,
         executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """alpha * x + y, returned as a new vector"""
    _check_pair(x, y)
    executor = executor or default_executor()
    shards = executor.map_shards(MessageKind.AXPY, kernels.axpy_shard,
                                 [(alpha, xs, ys) for xs, ys in zip(x.shards, y.shards)])
    return ShardedVector(x.layout, shards)


def scale(x: ShardedVector, c: float, executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """c * x, returned as a new vector"""
    if not math.isfinite(c):
        raise ArgumentError(f"scale factor must be finite, got {c}")
    executor = executor or default_executor()
    shards = executor.map_shards(MessageKind.SCALE, kernels.scale_shard, [(xs, c) for xs in x.shards])
    return ShardedVector(x.layout, shards)


def gather(x: ShardedVector, executor: Optional[ShardExecutor] = None, dtype=np.float64) -> np.ndarray:
    """Collect all shards on the coordinator as one logical vector"""
    executor = executor or default_executor()
    parts = executor.map_shards(MessageKind.GATHER, kernels.gather_shard, [(xs,) for xs in x.shards])
    return np.concatenate(parts).astype(dtype, copy=False)


def scatter(full: np.ndarray, layout: ShardLayout, dtype=np.float64,
            executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """Distribute a coordinator-side vector to the shard owners"""
    full = np.asarray(full)
    if full.shape != (layout.total_dim,):
        raise LayoutError(f"cannot scatter shape {full.shape} over a layout of dimension {layout.total_dim}")
    executor = executor or default_executor()
    shards = executor.map_shards(MessageKind.SCATTER, kernels.scatter_shard,
                                 [(full, start, stop, np.dtype(dtype)) for start, stop in layout.shard_bounds])
    return ShardedVector(layout, shards)
