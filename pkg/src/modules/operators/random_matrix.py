"""
Synthetic random-matrix operators: the Wigner bulk and spiked (outlier) models
"""
import math
from typing import Optional, Sequence

import numpy as np

from modules.runtime.executor import ShardExecutor
from .base import DEFAULT_DENSE_CAP, OperatorError, OperatorHandle
from .dense import DenseSymmetric, dense_operator


def wigner_matrix(n: int, sigma: float, seed: int, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Symmetric matrix with i.i.d. N(0, sigma^2) entries on and above the diagonal, mirrored below"""
    if n < 2:
        raise OperatorError(f"wigner operator needs n >= 2, got {n}")
    if not sigma > 0:
        raise OperatorError(f"sigma must be positive, got {sigma}")
    if n > cap:
        raise OperatorError(f"wigner operator of size {n} exceeds the dense cap {cap}")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.normal(0.0, sigma, size=(n, n)))
    return upper + np.triu(upper, 1).T


def spike_directions(n: int, count: int, seed: int) -> np.ndarray:
    """
    count orthonormal directions in R^n, one Gram-Schmidt pass against the earlier ones.
    Drawn from a stream separate from the bulk so that adding spikes leaves the bulk unchanged.
    """
    rng = np.random.default_rng([seed, 1])
    directions = []
    for _ in range(count):
        u = rng.standard_normal(n)
        for previous in directions:
            u -= (previous @ u) * previous
        u /= np.linalg.norm(u)
        directions.append(u)
    return np.array(directions).reshape(count, n)


def wigner_operator(n: int, sigma: float, seed: int, executor: Optional[ShardExecutor] = None,
                    cap: int = DEFAULT_DENSE_CAP) -> OperatorHandle:
    """Wigner operator; its spectrum concentrates on [-2 sigma sqrt(n), 2 sigma sqrt(n)]"""
    matrix = wigner_matrix(n, sigma, seed, cap)
    return dense_operator(DenseSymmetric(matrix, cap=cap), label=f"wigner(n={n}, sigma={sigma}, seed={seed})",
                          executor=executor)


def spiked_operator(n: int, bulk_sigma: float, spikes: Sequence[float], seed: int,
                    executor: Optional[ShardExecutor] = None, cap: int = DEFAULT_DENSE_CAP) -> OperatorHandle:
    """Wigner bulk plus rank-one terms lambda * u u^T with orthonormal u"""
    if n <= len(spikes):
        raise OperatorError(f"need n > number of spikes, got n={n} and {len(spikes)} spikes")
    matrix = wigner_matrix(n, bulk_sigma, seed, cap)
    for value, u in zip(spikes, spike_directions(n, len(spikes), seed)):
        matrix = matrix + float(value) * np.outer(u, u)
    label = f"spiked(n={n}, sigma={bulk_sigma}, spikes={list(spikes)}, seed={seed})"
    return dense_operator(DenseSymmetric(matrix, cap=cap), label=label, executor=executor)


def semicircle_radius(n: int, sigma: float) -> float:
    return 2.0 * sigma * math.sqrt(n)


def semicircle_density(x: np.ndarray, n: int, sigma: float) -> np.ndarray:
    """Limiting eigenvalue density of an n x n Wigner matrix with entry variance sigma^2"""
    radius = semicircle_radius(n, sigma)
    x = np.asarray(x, dtype=np.float64)
    inside = np.clip(radius ** 2 - x ** 2, 0.0, None)
    return 2.0 / (math.pi * radius ** 2) * np.sqrt(inside)
