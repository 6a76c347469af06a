"""
Per-shard kernels. Each runs on exactly one shard and touches nothing else,
so a worker can execute it on the shard it owns.
"""
import numpy as np


def dot_partial(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise products in f64 (exact for f32 inputs); summed by the coordinator"""
    return a.astype(np.float64, copy=False) * b.astype(np.float64, copy=False)


def axpy_shard(alpha: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x.dtype.type(alpha) * x + y


def scale_shard(x: np.ndarray, c: float) -> np.ndarray:
    return x * x.dtype.type(c)


def gather_shard(x: np.ndarray) -> np.ndarray:
    return x.copy()


def scatter_shard(full: np.ndarray, start: int, stop: int, dtype) -> np.ndarray:
    return np.array(full[start:stop], dtype=dtype, copy=True)
