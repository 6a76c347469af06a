"""
Smoothed spectral densities: Gaussian kernels centred on Ritz values,
probe averaging, and distances to reference densities.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import norm

from .errors import EmptySpectrumError
from .ritz import RitzSpectrum

DEFAULT_GRID_POINTS = 512
# kernel width as a fraction of the spectral width
DEFAULT_SIGMA_FRACTION = 0.01
SUPPORT_MARGIN = 5.0


def _gaussian_mixture(x: np.ndarray, s: RitzSpectrum, sigma: float) -> np.ndarray:
    return norm.pdf(x[..., None], loc=s.values, scale=sigma) @ s.weights


@dataclass(frozen=True)
class SmoothedDensity:
    grid: np.ndarray
    density: np.ndarray
    kernel_sigma: float
    spectrum: RitzSpectrum

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Density at arbitrary abscissae"""
        return _gaussian_mixture(np.asarray(x, dtype=np.float64), self.spectrum, self.kernel_sigma)

    def integral(self) -> float:
        return float(trapezoid(self.density, self.grid))


def default_sigma(s: RitzSpectrum) -> float:
    width = s.width
    return width * DEFAULT_SIGMA_FRACTION if width > 0 else 1.0


def smooth_density(s: RitzSpectrum, sigma: Optional[float] = None,
                   grid_points: int = DEFAULT_GRID_POINTS) -> SmoothedDensity:
    """
    Sum of w_i N(x; theta_i, sigma^2) on a uniform grid over
    [min theta - 5 sigma, max theta + 5 sigma].
    """
    if s.k == 0:
        raise EmptySpectrumError("cannot smooth an empty spectrum")
    sigma = default_sigma(s) if sigma is None else float(sigma)
    if not sigma > 0:
        raise ValueError(f"kernel sigma must be positive, got {sigma}")
    if grid_points < 2:
        raise ValueError(f"need at least 2 grid points, got {grid_points}")
    grid = np.linspace(s.values[0] - SUPPORT_MARGIN * sigma, s.values[-1] + SUPPORT_MARGIN * sigma, grid_points)
    return SmoothedDensity(grid, _gaussian_mixture(grid, s, sigma), sigma, s)


def average_spectra(runs: Sequence[RitzSpectrum]) -> RitzSpectrum:
    """Union of all Ritz pairs with each run weighted 1/n, renormalized to total weight 1"""
    if not runs:
        raise EmptySpectrumError("no spectra to average")
    values = np.concatenate([r.values for r in runs])
    weights = np.concatenate([r.weights / len(runs) for r in runs])
    order = np.argsort(values, kind="stable")
    return RitzSpectrum(values[order], weights[order] / np.sum(weights))


def l1_distance_to(density: SmoothedDensity, reference: Callable[[np.ndarray], np.ndarray],
                   support: Tuple[float, float], points: int = 4001) -> float:
    """Integral of |density - reference| over the support interval"""
    low, high = support
    if not high > low:
        raise ValueError(f"empty support [{low}, {high}]")
    x = np.linspace(low, high, points)
    return float(trapezoid(np.abs(density.evaluate(x) - reference(x)), x))
