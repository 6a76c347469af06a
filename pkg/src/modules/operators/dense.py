"""
Dense symmetric oracle operators
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from modules.runtime.executor import ShardExecutor
from modules.sharded.arithmetic import gather, scatter
from modules.sharded.vector import ShardedVector
from .base import DEFAULT_DENSE_CAP, OperatorError, OperatorHandle


@dataclass
class DenseSymmetric:
    entries: np.ndarray
    cap: int = DEFAULT_DENSE_CAP

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.float64)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise OperatorError(f"dense operator must be square, got shape {self.entries.shape}")
        if self.entries.shape[0] > self.cap:
            raise OperatorError(f"dense operator of size {self.entries.shape[0]} exceeds the cap {self.cap}")
        if not np.array_equal(self.entries, self.entries.T):
            i, j = np.argwhere(self.entries != self.entries.T)[0]
            raise OperatorError(f"matrix is not symmetric: entry ({i}, {j}) differs from ({j}, {i})")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def dense_apply(m: DenseSymmetric, x: ShardedVector, executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """Exact matrix-vector product in f64, returned in the precision and layout of x"""
    if x.dim != m.dim:
        raise OperatorError(f"dimension mismatch: matrix {m.dim}, vector {x.dim}")
    full = gather(x, executor)
    return scatter(m.entries @ full, x.layout, x.dtype, executor)


def dense_operator(m: DenseSymmetric, label: str = "dense",
                   executor: Optional[ShardExecutor] = None) -> OperatorHandle:
    return OperatorHandle(dim=m.dim, apply=lambda x: dense_apply(m, x, executor), label=label, matrix=m.entries)


def identity_operator(n: int, executor: Optional[ShardExecutor] = None) -> OperatorHandle:
    return dense_operator(DenseSymmetric(np.eye(n)), label=f"identity(n={n})", executor=executor)


def diagonal_operator(values: Sequence[float], executor: Optional[ShardExecutor] = None) -> OperatorHandle:
    return dense_operator(DenseSymmetric(np.diag(np.asarray(values, dtype=np.float64))),
                          label=f"diagonal(n={len(values)})", executor=executor)


def load_dense_file(path: Union[str, Path], cap: int = DEFAULT_DENSE_CAP) -> DenseSymmetric:
    """
    Read a dense operator file: a header line 'dim N' followed by N rows of N reals.
    Symmetry is validated exactly.
    """
    lines = [line.strip() for line in Path(path).read_text(encoding='utf-8').splitlines()]
    lines = [line for line in lines if line and not line.startswith('#')]
    if not lines:
        raise OperatorError(f"{path}: empty operator file")

    header = lines[0].split()
    if len(header) != 2 or header[0] != 'dim':
        raise OperatorError(f"{path}: first line must be 'dim N', got '{lines[0]}'")
    try:
        n = int(header[1])
    except ValueError:
        raise OperatorError(f"{path}: invalid dimension '{header[1]}'")
    if n < 1:
        raise OperatorError(f"{path}: dimension must be positive")
    if n > cap:
        raise OperatorError(f"{path}: dimension {n} exceeds the dense cap {cap}")

    rows = lines[1:]
    if len(rows) != n:
        raise OperatorError(f"{path}: expected {n} rows, found {len(rows)}")
    try:
        entries = np.array([[float(token) for token in row.split()] for row in rows], dtype=np.float64)
    except ValueError as e:
        raise OperatorError(f"{path}: {e}")
    if entries.shape != (n, n):
        raise OperatorError(f"{path}: every row must hold {n} values")
    return DenseSymmetric(entries, cap=cap)
