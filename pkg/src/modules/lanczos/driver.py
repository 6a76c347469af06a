"""
Lanczos iteration on a matrix-free operator.

Each step gathers nothing beyond the operator apply: the recurrence runs on
sharded vectors, and alpha and beta are exactly rounded f64 reductions. With
reorthogonalize=none only q_{k-1} and q_k are kept, matching the memory budget
of large runs; with reorthogonalize=full the residual is projected against
every stored column twice (classical Gram-Schmidt).
"""
import math
import time
from typing import List, Optional


from modules.logs.logger import SLQLogger
from modules.operators.base import OperatorError, OperatorHandle
from modules.runtime.executor import ShardExecutor, default_executor
from modules.sharded.arithmetic import axpy, dot, norm2, scale
from modules.sharded.errors import ArgumentError
from modules.sharded.layout import ShardLayout
from modules.sharded.probes import draw_probe
from modules.sharded.vector import ShardedVector
from .errors import BasisUnavailableError, LanczosBreakdownError
from .classes import LanczosBasis, LanczosConfig, LanczosResult, Reorthogonalization, RunDiagnostics, \
    TridiagonalMatrix

GRAM_SCHMIDT_PASSES = 2


def _start_vector(cfg: LanczosConfig, layout: ShardLayout, executor: ShardExecutor,
                  start: Optional[ShardedVector]) -> ShardedVector:
    dtype = cfg.precision.dtype
    if start is None:
        return draw_probe(cfg.probe, layout, dtype=dtype, executor=executor)
    if start.layout != layout:
        raise OperatorError("start vector layout differs from the run layout")
    start = start.astype(dtype)
    norm = norm2(start, executor)
    if norm == 0.0 or not math.isfinite(norm):
        raise ArgumentError(f"start vector must have a finite nonzero norm, got {norm}")
    return scale(start, 1.0 / norm, executor)


def _project_out(r: ShardedVector, columns: List[ShardedVector], executor: ShardExecutor) -> ShardedVector:
    for _ in range(GRAM_SCHMIDT_PASSES):
        coefficients = [dot(c, r, executor) for c in columns]
        for c, coefficient in zip(columns, coefficients):
            r = axpy(-coefficient, c, r, executor)
    return r


def lanczos_run(op: OperatorHandle, cfg: LanczosConfig, layout: ShardLayout,
                executor: Optional[ShardExecutor] = None, logger: Optional[SLQLogger] = None,
                start: Optional[ShardedVector] = None) -> LanczosResult:
    """
    Run up to cfg.k_max Lanczos steps from a probe (or an explicit start vector).

    A residual norm below the breakdown tolerance ends the run early; that is an
    invariant subspace, not a failure, and is recorded in the diagnostics.

    Raises:
        OperatorError: If the operator dimension is below 2 or differs from the layout
        LanczosBreakdownError: If alpha or beta becomes non-finite; the partial T is attached
    """
    if op.dim < 2:
        raise OperatorError(f"Lanczos needs an operator of dimension >= 2, got {op.dim}")
    if op.dim != layout.total_dim:
        raise OperatorError(f"operator dimension {op.dim} does not match layout dimension {layout.total_dim}")
    executor = executor or default_executor()
    full = cfg.reorthogonalize is Reorthogonalization.FULL

    q = _start_vector(cfg, layout, executor, start)
    q_prev: Optional[ShardedVector] = None
    columns = [q] if cfg.store_basis else []
    alphas: List[float] = []
    betas: List[float] = []
    diagnostics = RunDiagnostics(orthogonality=[0.0] if cfg.store_basis else None)

    def breakdown(what: str, value: float) -> LanczosBreakdownError:
        partial = TridiagonalMatrix(alphas, betas[:max(len(alphas) - 1, 0)])
        return LanczosBreakdownError(f"non-finite {what} ({value}) at step {len(alphas)}", partial, diagnostics)

    for step in range(cfg.k_max):
        began = time.perf_counter()
        r = op(q)
        diagnostics.apply_seconds.append(time.perf_counter() - began)

        if q_prev is not None:
            r = axpy(-betas[-1], q_prev, r, executor)
        alpha = dot(q, r, executor)
        if not math.isfinite(alpha):
            raise breakdown("alpha", alpha)
        alphas.append(alpha)
        r = axpy(-alpha, q, r, executor)
        if full:
            r = _project_out(r, columns, executor)

        beta = norm2(r, executor)
        if not math.isfinite(beta):
            raise breakdown("beta", beta)
        diagnostics.betas.append(beta)

        if logger:
            logger.debug(f"lanczos step {step}: alpha={alpha!r} beta={beta!r} "
                         f"apply={diagnostics.apply_seconds[-1]:.4f}s")

        if beta < cfg.tolerance:
            diagnostics.terminated_early = True
            if logger:
                logger.debug(f"lanczos stopped at k={len(alphas)}: beta {beta:.3e} below {cfg.tolerance:.1e}")
            break
        if step == cfg.k_max - 1:
            break

        betas.append(beta)
        q_prev, q = q, scale(r, 1.0 / beta, executor)
        if cfg.store_basis:
            overlap = max(abs(dot(c, q, executor)) for c in columns)
            diagnostics.orthogonality.append(max(diagnostics.orthogonality[-1], overlap))
            columns.append(q)

    basis = LanczosBasis(columns) if cfg.store_basis else None
    return LanczosResult(TridiagonalMatrix(alphas, betas), basis, diagnostics)


def loss_of_orthogonality(basis: Optional[LanczosBasis], executor: Optional[ShardExecutor] = None) -> float:
    """max over i != j of |q_i^T q_j|"""
    if basis is None:
        raise BasisUnavailableError("the run did not store its basis; rerun with store_basis or full reorthogonalization")
    worst = 0.0
    for i, qi in enumerate(basis.columns):
        for qj in basis.columns[i + 1:]:
            worst = max(worst, abs(dot(qi, qj, executor)))
    return worst


def recurrence_residual(op: OperatorHandle, result: LanczosResult,
                        executor: Optional[ShardExecutor] = None) -> float:
    """max_j |A q_j - alpha_j q_j - beta_j q_{j+1} - beta_{j-1} q_{j-1}| over the inner steps of a stored run"""
    if result.basis is None:
        raise BasisUnavailableError("recurrence residual needs the stored basis")
    columns = result.basis.columns
    t = result.tridiagonal
    worst = 0.0
    for j in range(min(t.k, len(columns) - 1)):
        r = axpy(-t.alphas[j], columns[j], op(columns[j]), executor)
        r = axpy(-t.betas[j], columns[j + 1], r, executor)
        if j > 0:
            r = axpy(-t.betas[j - 1], columns[j - 1], r, executor)
        worst = max(worst, norm2(r, executor))
    return worst
