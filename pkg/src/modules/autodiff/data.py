"""
Batches of (inputs, targets) samples: loading from text files and
deterministic synthetic generation.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np

from .errors import DataError
from .models import LossKind, ModelSpec


@dataclass(frozen=True)
class Batch:
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        if self.inputs.ndim != 2 or self.inputs.shape[0] == 0:
            raise DataError(f"batch inputs must be a non-empty (B, F) array, got shape {self.inputs.shape}")
        if self.targets.shape != (self.inputs.shape[0],):
            raise DataError(f"batch has {self.inputs.shape[0]} inputs but targets of shape {self.targets.shape}")

    @property
    def size(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def features(self) -> int:
        return int(self.inputs.shape[1])


def split_batches(samples: Batch, batch_size: int) -> List[Batch]:
    """Consecutive batches of batch_size samples; the last one may be smaller"""
    if batch_size < 1:
        raise DataError(f"batch size must be positive, got {batch_size}")
    return [Batch(samples.inputs[i:i + batch_size], samples.targets[i:i + batch_size])
            for i in range(0, samples.size, batch_size)]


def load_samples(path: Union[str, Path]) -> Batch:
    """
    Whitespace-separated numeric rows; the last column is the target.
    Lines starting with '#' are ignored.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"data file not found: {path}")
    try:
        table = np.loadtxt(path, ndmin=2, comments="#")
    except ValueError as e:
        raise DataError(f"could not parse data file {path}: {e}") from e
    if table.size == 0:
        raise DataError(f"data file {path} has no samples")
    if table.shape[1] < 2:
        raise DataError(f"data file {path} needs at least one feature column and a target column")
    return Batch(table[:, :-1], table[:, -1])


def synthetic_samples(spec: ModelSpec, n_samples: int, seed: int = 0) -> Batch:
    """
    Normal inputs with a fixed nonlinear regression target (mse) or
    uniformly drawn class labels (cross-entropy).
    """
    if n_samples < 1:
        raise DataError(f"sample count must be positive, got {n_samples}")
    rng = np.random.default_rng(seed)
    inputs = rng.normal(size=(n_samples, spec.input_features))
    if spec.loss is LossKind.MSE:
        direction = rng.normal(size=spec.input_features) / np.sqrt(spec.input_features)
        targets = np.sin(inputs @ direction) + 0.1 * rng.normal(size=n_samples)
    else:
        targets = rng.integers(0, spec.n_classes, size=n_samples).astype(np.float64)
    return Batch(inputs, targets)


def check_batches(batches: Iterable[Batch]) -> List[Batch]:
    """Materialize a loader, rejecting an empty one or mixed feature widths"""
    batches = list(batches)
    if not batches:
        raise DataError("data loader yielded no batches")
    widths = {b.features for b in batches}
    if len(widths) != 1:
        raise DataError(f"batches disagree on feature width: {sorted(widths)}")
    return batches
