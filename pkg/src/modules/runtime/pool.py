"""
In-process worker pool emulating one device per shard.

One coordinator thread (the caller) sends requests to per-worker inboxes and
collects replies from a shared outbox. Workers are passive: they own the shard
they are handed, run the requested kernel and answer exactly once. During the
sequential phases of a Lanczos step (operator apply, scalar recurrences) all
but the coordinator sit idle, as with layer-wise device placement.
"""
import itertools
import queue
import threading
import time
from collections import Counter
from typing import Any, Callable, List, Optional, Sequence, Set, Tuple

import numpy as np

from modules.logs.logger import SLQLogger
from modules.sharded.layout import ShardLayout
from .errors import PoolError, ProtocolError
from .messages import MessageKind, Reply, Request


class WorkerPool:
    """Fixed set of shard workers answering the mailbox protocol"""

    def __init__(self, layout: ShardLayout, logger: Optional[SLQLogger] = None,
                 reply_jitter: float = 0.0, jitter_seed: int = 0, reply_timeout: float = 120.0):
        """
        Args:
            layout: Shard layout; worker i owns shard i
            logger: Optional logger for lifecycle messages
            reply_jitter: Upper bound (seconds) of a random delay before each reply
            jitter_seed: Seed for the reply delays
            reply_timeout: Seconds to wait for any single reply
        """
        self.layout = layout
        self.logger = logger
        self.reply_jitter = reply_jitter
        self.reply_timeout = reply_timeout
        self.message_counts: Counter = Counter()

        self._inboxes: List[queue.Queue] = [queue.Queue() for _ in range(layout.worker_count)]
        self._outbox: queue.Queue = queue.Queue()
        self._ids = itertools.count()
        self._lock = threading.Lock()
        self._closed = False
        self._abandoned: Set[int] = set()
        self._workers: List[threading.Thread] = []

        try:
            for index in range(layout.worker_count):
                rng = np.random.default_rng([jitter_seed, index]) if reply_jitter > 0 else None
                worker = threading.Thread(target=self._worker_loop, args=(index, rng),
                                          name=f"shard-worker-{index}", daemon=True)
                worker.start()
                self._workers.append(worker)
        except RuntimeError as e:
            self._closed = True
            raise PoolError(f"failed to start worker {len(self._workers)}: {e}") from e

        if self.logger:
            self.logger.debug(f"Worker pool started with {layout.worker_count} workers, "
                              f"shard sizes {layout.shard_sizes}")

    @property
    def worker_count(self) -> int:
        return self.layout.worker_count

    def _worker_loop(self, index: int, rng: Optional[np.random.Generator]) -> None:
        inbox = self._inboxes[index]
        while True:
            request: Request = inbox.get()
            if rng is not None:
                time.sleep(float(rng.uniform(0.0, self.reply_jitter)))
            if request.kind is MessageKind.SHUTDOWN:
                self._outbox.put(Reply(request.request_id, index))
                return
            try:
                payload = request.fn(*request.args)
                self._outbox.put(Reply(request.request_id, index, payload))
            except Exception as e:
                self._outbox.put(Reply(request.request_id, index, error=e))

    def _round_trip(self, kind: MessageKind, fn: Optional[Callable[..., Any]],
                    args_per_shard: Sequence[Tuple[Any, ...]]) -> List[Reply]:
        request_ids = {}
        for index, args in enumerate(args_per_shard):
            request = Request(next(self._ids), kind, fn, tuple(args))
            request_ids[request.request_id] = index
            self._inboxes[index].put(request)
        self.message_counts[kind.value] += len(args_per_shard)

        replies: List[Optional[Reply]] = [None] * len(args_per_shard)
        pending = len(args_per_shard)
        while pending:
            try:
                reply: Reply = self._outbox.get(timeout=self.reply_timeout)
            except queue.Empty:
                missing = [i for i, r in enumerate(replies) if r is None]
                # Their replies may still arrive; later rounds drop them
                self._abandoned.update(rid for rid, i in request_ids.items() if replies[i] is None)
                raise ProtocolError(f"no reply to '{kind.value}' from worker(s) {missing} "
                                    f"within {self.reply_timeout}s")
            if reply.request_id in self._abandoned:
                self._abandoned.discard(reply.request_id)
                if self.logger:
                    self.logger.debug(f"Dropped late reply {reply.request_id} from worker {reply.worker_index}")
                continue
            index = request_ids.get(reply.request_id)
            if index is None or index != reply.worker_index:
                raise ProtocolError(f"unexpected reply {reply.request_id} from worker {reply.worker_index}")
            if replies[index] is not None:
                raise ProtocolError(f"worker {index} answered request {reply.request_id} twice")
            replies[index] = reply
            pending -= 1
        return replies

    def map_shards(self, kind: MessageKind, fn: Callable[..., Any],
                   args_per_shard: Sequence[Tuple[Any, ...]]) -> List[Any]:
        """
        Run fn on every worker with its own arguments and return the payloads in worker order

        Raises:
            PoolError: If the pool is shut down or the argument count does not match the workers
            ProtocolError: If a reply is missing or duplicated
        """
        if len(args_per_shard) != self.worker_count:
            raise PoolError(f"{len(args_per_shard)} shard arguments for {self.worker_count} workers")
        with self._lock:
            if self._closed:
                raise PoolError("worker pool is shut down")
            replies = self._round_trip(kind, fn, args_per_shard)

        # Errors surface in ascending worker order, independent of completion order
        for reply in replies:
            if reply.error is not None:
                raise reply.error
        return [reply.payload for reply in replies]

    def shutdown(self) -> None:
        """Stop all workers after the work already queued; safe to call twice"""
        with self._lock:
            if self._closed:
                return
            self._closed = True
            try:
                self._round_trip(MessageKind.SHUTDOWN, None, [()] * self.worker_count)
            except ProtocolError as e:
                # Workers still busy with abandoned work are daemons; leave them
                if self.logger:
                    self.logger.warning(f"Worker pool shutdown not acknowledged: {e}")
        for worker in self._workers:
            worker.join(timeout=self.reply_timeout)
        if self.logger:
            self.logger.debug(f"Worker pool stopped; message counts {dict(self.message_counts)}")

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.shutdown()


def spawn_pool(n: int, layout: ShardLayout, logger: Optional[SLQLogger] = None, **kwargs) -> WorkerPool:
    """
    Start a pool of n workers, one per shard of layout

    Raises:
        PoolError: If n does not equal layout.worker_count or a worker cannot start
    """
    if n != layout.worker_count:
        raise PoolError(f"pool size {n} does not match layout with {layout.worker_count} shards")
    return WorkerPool(layout, logger=logger, **kwargs)
