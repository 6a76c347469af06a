"""
Deterministic random probe vectors.

Entries come from the Philox counter-based generator keyed on the seed; entry i
always consumes raw outputs 2i and 2i+1, so every shard can seek straight to its
first global index and the logical vector is the same for any layout.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from modules.runtime.executor import ShardExecutor, default_executor
from modules.runtime.messages import MessageKind
from .arithmetic import norm2, scale
from .errors import ArgumentError, ProbeIndexError
from .layout import ShardLayout
from .vector import ShardedVector

_RAW_PER_ENTRY = 2
_RAW_PER_BLOCK = 4
_SEED_MASK = (1 << 64) - 1
_TWO_POW_M53 = 2.0 ** -53


class ProbeDistribution(str, Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    ONE_HOT = "one_hot"


@dataclass(frozen=True)
class ProbeSpec:
    seed: int = 42
    distribution: ProbeDistribution = ProbeDistribution.GAUSSIAN
    normalize: bool = True
    index: Optional[int] = None

    @classmethod
    def one_hot(cls, index: int, seed: int = 0) -> "ProbeSpec":
        return cls(seed=seed, distribution=ProbeDistribution.ONE_HOT, normalize=False, index=index)


def seed_key(seed: int) -> int:
    """Philox key for a seed; negative seeds wrap to their 64-bit two's complement"""
    return seed & _SEED_MASK


def _raw_pairs(seed: int, start: int, count: int) -> np.ndarray:
    """Raw 64-bit outputs for global entries [start, start + count), two per entry"""
    first = _RAW_PER_ENTRY * start
    block, offset = divmod(first, _RAW_PER_BLOCK)
    bit_generator = np.random.Philox(key=seed_key(seed), counter=block)
    raw = bit_generator.random_raw(offset + _RAW_PER_ENTRY * count)[offset:]
    return raw.reshape(count, _RAW_PER_ENTRY)


def probe_shard(spec: ProbeSpec, start: int, stop: int) -> np.ndarray:
    """Entries [start, stop) of the logical probe, in f64"""
    count = stop - start
    if spec.distribution is ProbeDistribution.ONE_HOT:
        shard = np.zeros(count, dtype=np.float64)
        if start <= spec.index < stop:
            shard[spec.index - start] = 1.0
        return shard

    raw = _raw_pairs(spec.seed, start, count)
    if spec.distribution is ProbeDistribution.RADEMACHER:
        return np.where((raw[:, 0] >> np.uint64(63)) == 1, 1.0, -1.0)

    # Box-Muller; u1 lies in (0, 1] so the log is finite
    u1 = ((raw[:, 0] >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO_POW_M53
    u2 = (raw[:, 1] >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def draw_probe(spec: ProbeSpec, layout: ShardLayout, dtype=np.float64,
               executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """
    Generate the probe described by spec on the given layout

    Raises:
        ProbeIndexError: If a one-hot index lies outside [0, P)
        ArgumentError: If a normalized probe has zero norm
    """
    if spec.distribution is ProbeDistribution.ONE_HOT:
        if spec.index is None or not 0 <= spec.index < layout.total_dim:
            raise ProbeIndexError(f"one-hot index {spec.index} outside [0, {layout.total_dim})")

    executor = executor or default_executor()
    dtype = np.dtype(dtype)
    shards = executor.map_shards(
        MessageKind.APPLY_SHARD,
        lambda s, a, b: probe_shard(s, a, b).astype(dtype),
        [(spec, start, stop) for start, stop in layout.shard_bounds],
    )
    vector = ShardedVector(layout, shards)
    if not spec.normalize:
        return vector

    norm = norm2(vector, executor)
    if norm == 0.0:
        raise ArgumentError("cannot normalize an all-zero probe")
    return scale(vector, 1.0 / norm, executor)
