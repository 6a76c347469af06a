"""
Shard executors: who runs a per-shard kernel.

SerialExecutor runs kernels inline in shard order; WorkerPool (pool.py) sends
them to the worker owning each shard. Both return results indexed by shard so
that callers reduce in the same order either way.
"""
from collections import Counter
from typing import Any, Callable, List, Protocol, Sequence, Tuple

from .messages import MessageKind


class ShardExecutor(Protocol):
    message_counts: Counter

    def map_shards(self, kind: MessageKind, fn: Callable[..., Any],
                   args_per_shard: Sequence[Tuple[Any, ...]]) -> List[Any]:
        ...


class SerialExecutor:
    """Runs every shard kernel on the calling thread, in ascending shard order"""

    def __init__(self):
        self.message_counts: Counter = Counter()

    def map_shards(self, kind: MessageKind, fn: Callable[..., Any],
                   args_per_shard: Sequence[Tuple[Any, ...]]) -> List[Any]:
        self.message_counts[kind.value] += len(args_per_shard)
        return [fn(*args) for args in args_per_shard]


_default_executor = SerialExecutor()


def default_executor() -> SerialExecutor:
    return _default_executor
