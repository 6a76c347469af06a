"""
Ghost eigenvalue detection.

Without reorthogonalization a converged Ritz value reappears as a near-exact
duplicate carrying almost no quadrature weight. Ritz values are grouped by
single-linkage clustering; inside a cluster every member lighter than the
weight threshold (other than the heaviest member) is flagged. Spectra are
annotated, never modified.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from modules.quadrature.ritz import RitzSpectrum

DEFAULT_CLUSTER_TOL = 1e-6
DEFAULT_WEIGHT_THRESHOLD = 1e-8


@dataclass(frozen=True)
class RitzCluster:
    representative: float
    members: Tuple[float, ...]
    indices: Tuple[int, ...]
    total_weight: float

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class GhostReport:
    clusters: Tuple[RitzCluster, ...]
    ghost_flags: Tuple[bool, ...]
    cluster_tol: float
    weight_threshold: float

    @property
    def ghost_count(self) -> int:
        return sum(self.ghost_flags)

    @property
    def ghost_indices(self) -> List[int]:
        return [i for i, flagged in enumerate(self.ghost_flags) if flagged]


def _cluster_indices(values: np.ndarray, gap: float) -> List[List[int]]:
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def detect_ghosts(s: RitzSpectrum, cluster_tol: float = DEFAULT_CLUSTER_TOL,
                  weight_threshold: float = DEFAULT_WEIGHT_THRESHOLD) -> GhostReport:
    """
    Args:
        s: Spectrum to annotate
        cluster_tol: Largest gap inside a cluster, relative to the spectral width
        weight_threshold: Ghost weight bound, relative to the largest weight in the spectrum

    Returns:
        Clusters covering every Ritz pair and one flag per pair
    """
    gap = cluster_tol * s.width
    absolute_threshold = weight_threshold * float(np.max(s.weights))
    flags = [False] * s.k
    clusters = []
    for group in _cluster_indices(s.values, gap):
        weights = s.weights[group]
        heaviest = group[int(np.argmax(weights))]
        if len(group) > 1:
            for i in group:
                if i != heaviest and s.weights[i] < absolute_threshold:
                    flags[i] = True
        clusters.append(RitzCluster(representative=float(s.values[heaviest]),
                                    members=tuple(float(s.values[i]) for i in group),
                                    indices=tuple(group),
                                    total_weight=float(np.sum(weights))))
    return GhostReport(tuple(clusters), tuple(flags), cluster_tol, weight_threshold)
