"""
ShardedVector: a logical real vector stored as per-worker dense shards
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import LayoutError
from .layout import ShardLayout


@dataclass
class ShardedVector:
    layout: ShardLayout
    shards: List[np.ndarray]

    def __post_init__(self):
        if len(self.shards) != self.layout.worker_count:
            raise LayoutError(f"{len(self.shards)} shards for a layout of {self.layout.worker_count} workers")
        dtypes = {shard.dtype for shard in self.shards}
        if len(dtypes) != 1:
            raise LayoutError(f"all shards must share one precision, got {sorted(str(d) for d in dtypes)}")
        for shard, size in zip(self.shards, self.layout.shard_sizes):
            if shard.ndim != 1 or shard.shape[0] != size:
                raise LayoutError(f"shard of shape {shard.shape} does not match range size {size}")

    @property
    def dtype(self) -> np.dtype:
        return self.shards[0].dtype

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    @classmethod
    def from_array(cls, array: np.ndarray, layout: ShardLayout, dtype: Optional[np.dtype] = None) -> "ShardedVector":
        """Copy a full vector into owned shards (coordinator-side; see arithmetic.scatter for the pool path)"""
        array = np.asarray(array)
        dtype = np.dtype(dtype) if dtype is not None else array.dtype
        return cls(layout, [np.array(part, dtype=dtype, copy=True) for part in layout.split(array)])

    @classmethod
    def zeros(cls, layout: ShardLayout, dtype=np.float64) -> "ShardedVector":
        return cls(layout, [np.zeros(size, dtype=dtype) for size in layout.shard_sizes])

    def to_array(self) -> np.ndarray:
        """Concatenate the shards into one logical vector"""
        return np.concatenate(self.shards)

    def copy(self) -> "ShardedVector":
        return ShardedVector(self.layout, [shard.copy() for shard in self.shards])

    def astype(self, dtype) -> "ShardedVector":
        return ShardedVector(self.layout, [shard.astype(dtype, copy=True) for shard in self.shards])
