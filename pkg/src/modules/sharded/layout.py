"""
Shard layout: ordered contiguous half-open ranges covering [0, P), one per worker
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import LayoutError


@dataclass(frozen=True)
class ShardLayout:
    """Partition of P operator coordinates into worker-owned contiguous ranges"""
    total_dim: int
    shard_bounds: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.total_dim < 1:
            raise LayoutError(f"total_dim must be positive, got {self.total_dim}")
        if not self.shard_bounds:
            raise LayoutError("layout needs at least one shard")
        cursor = 0
        for start, stop in self.shard_bounds:
            if start != cursor:
                raise LayoutError(f"shard ranges must be contiguous and sorted: expected start {cursor}, got {start}")
            if stop <= start:
                raise LayoutError(f"shard range [{start}, {stop}) is empty")
            cursor = stop
        if cursor != self.total_dim:
            raise LayoutError(f"shard ranges cover [0, {cursor}) but total_dim is {self.total_dim}")

    @property
    def worker_count(self) -> int:
        return len(self.shard_bounds)

    @property
    def shard_sizes(self) -> List[int]:
        return [stop - start for start, stop in self.shard_bounds]

    @classmethod
    def even(cls, total_dim: int, worker_count: int) -> "ShardLayout":
        """
        Split P coordinates over n workers; the first P mod n shards get one extra element.
        P=10, n=4 gives sizes (3, 3, 2, 2).
        """
        if worker_count < 1:
            raise LayoutError(f"worker_count must be positive, got {worker_count}")
        if worker_count > total_dim:
            raise LayoutError(f"cannot split {total_dim} coordinates over {worker_count} workers")
        base, extra = divmod(total_dim, worker_count)
        return cls.from_sizes([base + 1 if i < extra else base for i in range(worker_count)])

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "ShardLayout":
        bounds = []
        cursor = 0
        for size in sizes:
            bounds.append((cursor, cursor + int(size)))
            cursor += int(size)
        return cls(total_dim=cursor, shard_bounds=tuple(bounds))

    def split(self, array: np.ndarray) -> List[np.ndarray]:
        """Views of a full-length array, one per shard"""
        if array.shape != (self.total_dim,):
            raise LayoutError(f"expected a vector of length {self.total_dim}, got shape {array.shape}")
        return [array[start:stop] for start, stop in self.shard_bounds]
