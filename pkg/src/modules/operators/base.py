"""
Matrix-free symmetric operator contract
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from modules.runtime.executor import ShardExecutor
from modules.sharded.arithmetic import dot, norm2
from modules.sharded.layout import ShardLayout
from modules.sharded.probes import ProbeSpec, draw_probe
from modules.sharded.vector import ShardedVector

# Oracle operators never materialize more than this many rows
DEFAULT_DENSE_CAP = 2048


class OperatorError(ValueError):
    """Operator input is malformed (dimension mismatch, asymmetry, size cap)"""
    pass


@dataclass
class OperatorHandle:
    """
    A symmetric operator known only through its action on sharded vectors.
    matrix is set for dense oracles so tests and reports can call a dense eigensolver.
    """
    dim: int
    apply: Callable[[ShardedVector], ShardedVector]
    label: str
    matrix: Optional[np.ndarray] = None

    def __call__(self, x: ShardedVector) -> ShardedVector:
        if x.dim != self.dim:
            raise OperatorError(f"operator '{self.label}' has dimension {self.dim}, vector has {x.dim}")
        y = self.apply(x)
        if y.layout != x.layout:
            raise OperatorError(f"operator '{self.label}' changed the shard layout")
        return y

    def eigenvalues(self) -> np.ndarray:
        """Dense eigenvalues, ascending; only for oracle operators"""
        if self.matrix is None:
            raise OperatorError(f"operator '{self.label}' has no dense matrix")
        return np.linalg.eigvalsh(self.matrix)


def check_symmetry(op: OperatorHandle, layout: ShardLayout, trials: int = 10, seed: int = 0,
                   executor: Optional[ShardExecutor] = None) -> float:
    """
    Largest normalized asymmetry |<Ax, y> - <x, Ay>| / (|x| |y| est|A|) over random pairs.
    est|A| is the largest observed |Ax| / |x|.
    """
    pairs = []
    norm_estimate = 0.0
    for trial in range(trials):
        x = draw_probe(ProbeSpec(seed=seed + 2 * trial, normalize=False), layout, executor=executor)
        y = draw_probe(ProbeSpec(seed=seed + 2 * trial + 1, normalize=False), layout, executor=executor)
        ax, ay = op(x), op(y)
        norm_estimate = max(norm_estimate, norm2(ax, executor) / norm2(x, executor),
                            norm2(ay, executor) / norm2(y, executor))
        pairs.append((x, y, ax, ay))

    worst = 0.0
    for x, y, ax, ay in pairs:
        scale = norm2(x, executor) * norm2(y, executor) * max(norm_estimate, np.finfo(float).tiny)
        worst = max(worst, abs(dot(ax, y, executor) - dot(x, ay, executor)) / scale)
    return worst
