"""
Lanczos run settings and results
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from modules.sharded.precision import Precision
from modules.sharded.probes import ProbeSpec
from modules.sharded.vector import ShardedVector
from .errors import LanczosConfigError

DEFAULT_BREAKDOWN_TOL = {Precision.F64: 1e-12, Precision.F32: 1e-7}


class Reorthogonalization(str, Enum):
    NONE = "none"
    FULL = "full"


@dataclass(frozen=True)
class LanczosConfig:
    k_max: int = 10
    breakdown_tol: Optional[float] = None
    reorthogonalize: Reorthogonalization = Reorthogonalization.NONE
    probe: ProbeSpec = field(default_factory=ProbeSpec)
    store_basis: bool = False
    precision: Precision = Precision.F64

    def __post_init__(self):
        object.__setattr__(self, "reorthogonalize", Reorthogonalization(self.reorthogonalize))
        object.__setattr__(self, "precision", Precision(self.precision))
        if self.k_max < 1:
            raise LanczosConfigError(f"k_max must be at least 1, got {self.k_max}")
        if self.breakdown_tol is not None and not self.breakdown_tol > 0:
            raise LanczosConfigError(f"breakdown_tol must be positive, got {self.breakdown_tol}")
        # full reorthogonalization projects against the stored basis
        if self.reorthogonalize is Reorthogonalization.FULL:
            object.__setattr__(self, "store_basis", True)

    @property
    def tolerance(self) -> float:
        return self.breakdown_tol if self.breakdown_tol is not None else DEFAULT_BREAKDOWN_TOL[self.precision]


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal T: alphas on the diagonal, betas beside it. Always f64."""
    alphas: Tuple[float, ...]
    betas: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.betas) != max(len(self.alphas) - 1, 0):
            raise ValueError(f"{len(self.alphas)} alphas need {len(self.alphas) - 1} betas, got {len(self.betas)}")
        if any(not b > 0 for b in self.betas):
            raise ValueError("off-diagonal entries must be strictly positive")

    @property
    def k(self) -> int:
        return len(self.alphas)

    def to_dense(self) -> np.ndarray:
        t = np.diag(np.array(self.alphas))
        if self.betas:
            off = np.array(self.betas)
            t += np.diag(off, 1) + np.diag(off, -1)
        return t


@dataclass
class LanczosBasis:
    columns: List[ShardedVector]

    def to_matrix(self) -> np.ndarray:
        """Columns gathered into a P x k array"""
        return np.column_stack([c.to_array().astype(np.float64) for c in self.columns])


@dataclass
class RunDiagnostics:
    """
    betas: every computed residual norm, including the final one that is not part of T.
    orthogonality: running max |q_i^T q_j| after each step, only when the basis is stored.
    """
    betas: List[float] = field(default_factory=list)
    orthogonality: Optional[List[float]] = None
    apply_seconds: List[float] = field(default_factory=list)
    terminated_early: bool = False

    @property
    def steps(self) -> int:
        return len(self.betas)

    @property
    def final_residual(self) -> Optional[float]:
        return self.betas[-1] if self.betas else None


class LanczosResult(NamedTuple):
    tridiagonal: TridiagonalMatrix
    basis: Optional[LanczosBasis]
    diagnostics: RunDiagnostics
