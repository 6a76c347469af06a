"""Floating-point error bounds for the quadrature weights"""
from dataclasses import dataclass

from modules.sharded.errors import ArgumentError
from modules.sharded.precision import Precision


@dataclass(frozen=True)
class PrecisionReport:
    precision: Precision
    unit_roundoff: float
    k: int
    # |w_hat - w| / w <= 2 k u
    weight_rel_bound: float
    machine_eps_threshold: float
    # expected level of |q_i^T q_j| without reorthogonalization
    orthogonality_level: float
    gamma3: float


def precision_report(precision: Precision, k: int) -> PrecisionReport:
    if k < 1:
        raise ArgumentError(f"iteration count must be at least 1, got {k}")
    precision = Precision(precision)
    u = precision.unit_roundoff
    return PrecisionReport(
        precision=precision,
        unit_roundoff=u,
        k=k,
        weight_rel_bound=2 * k * u,
        machine_eps_threshold=precision.machine_epsilon,
        orthogonality_level=k * u,
        gamma3=3 * u / (1 - 3 * u),
    )
