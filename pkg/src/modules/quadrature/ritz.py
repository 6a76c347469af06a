"""
Ritz values and Gauss quadrature weights of a Lanczos tridiagonal.

The weights are the squared first components of the normalized eigenvectors
of T, so sum_i w_i f(theta_i) approximates q0^T f(A) q0.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from modules.lanczos.classes import TridiagonalMatrix
from modules.logs.logger import SLQLogger
from .errors import EmptySpectrumError, QuadratureError

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class RitzSpectrum:
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if values.shape != weights.shape:
            raise ValueError(f"{values.size} Ritz values but {weights.size} weights")
        if values.size == 0:
            raise EmptySpectrumError("a spectrum needs at least one Ritz pair")
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(weights)):
            raise QuadratureError("Ritz values and weights must be finite")
        if np.any(np.diff(values) < 0):
            raise ValueError("Ritz values must be sorted ascending")
        if np.any(weights < 0):
            raise ValueError("Ritz weights must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @property
    def k(self) -> int:
        return int(self.values.size)

    @property
    def width(self) -> float:
        return float(self.values[-1] - self.values[0])

    def moment(self, order: int) -> float:
        return float(np.sum(self.weights * self.values ** order))


def _eigensystem(t: TridiagonalMatrix, logger: Optional[SLQLogger]):
    diagonal = np.array(t.alphas)
    off_diagonal = np.array(t.betas)
    dense = t.to_dense()
    scale = max(np.linalg.norm(dense, 2), np.finfo(np.float64).tiny)

    values, vectors = eigh_tridiagonal(diagonal, off_diagonal)
    residuals = np.linalg.norm(dense @ vectors - vectors * values, axis=0)
    if np.all(residuals <= RESIDUAL_TOL * scale):
        return values, vectors

    if logger:
        logger.warning(f"tridiagonal solver residual {residuals.max():.3e} above tolerance; "
                       f"falling back to dense symmetric eigensolver")
    values, vectors = np.linalg.eigh(dense)
    residuals = np.linalg.norm(dense @ vectors - vectors * values, axis=0)
    if not np.all(residuals <= RESIDUAL_TOL * scale):
        raise QuadratureError(f"eigenpair residual {residuals.max():.3e} exceeds {RESIDUAL_TOL} * |T|")
    return values, vectors


def ritz_decompose(t: TridiagonalMatrix, logger: Optional[SLQLogger] = None) -> RitzSpectrum:
    """
    Eigenvalues of T and the squared first eigenvector components.

    Raises:
        EmptySpectrumError: If T has no rows
        QuadratureError: If T has non-finite entries or no solver meets the residual check
    """
    if t.k == 0:
        raise EmptySpectrumError("tridiagonal matrix is empty")
    if not all(np.isfinite(t.alphas)) or not all(np.isfinite(t.betas)):
        raise QuadratureError("tridiagonal matrix has non-finite entries")
    if t.k == 1:
        return RitzSpectrum(np.array(t.alphas), np.ones(1))
    values, vectors = _eigensystem(t, logger)
    return RitzSpectrum(values, vectors[0, :] ** 2)
