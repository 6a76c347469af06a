"""Split spectral mass between Ritz values indistinguishable from zero and the rest"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from modules.quadrature.ritz import RitzSpectrum

# f32 machine epsilon
DEFAULT_EPS_THRESHOLD = 2.0 ** -23


@dataclass(frozen=True)
class NearZeroPartition:
    near_zero_mass: float
    outlier_mass: float
    near_zero_indices: Tuple[int, ...]
    cutoff: float


def classify_near_zero(s: RitzSpectrum, eps_threshold: float = DEFAULT_EPS_THRESHOLD) -> NearZeroPartition:
    """Pairs with |theta| <= eps_threshold * spectral width count as zero; masses are normalized to sum 1"""
    cutoff = eps_threshold * s.width
    near = np.abs(s.values) <= cutoff
    total = float(np.sum(s.weights))
    if total == 0.0:
        return NearZeroPartition(float(near.all()), float(not near.all()), tuple(np.flatnonzero(near).tolist()),
                                 cutoff)
    near_mass = float(np.sum(s.weights[near])) / total
    return NearZeroPartition(near_zero_mass=near_mass,
                             outlier_mass=float(np.sum(s.weights[~near])) / total,
                             near_zero_indices=tuple(np.flatnonzero(near).tolist()),
                             cutoff=cutoff)
