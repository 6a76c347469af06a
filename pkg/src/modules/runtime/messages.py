"""
Mailbox protocol between the coordinator and shard workers
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional, Tuple


class MessageKind(str, Enum):
    APPLY_SHARD = "apply_shard"
    DOT_PARTIAL = "dot_partial"
    AXPY = "axpy"
    SCALE = "scale"
    GATHER = "gather"
    SCATTER = "scatter"
    SHUTDOWN = "shutdown"


@dataclass(frozen=True)
class Request:
    request_id: int
    kind: MessageKind
    fn: Optional[Callable[..., Any]] = None
    args: Tuple[Any, ...] = ()


@dataclass(frozen=True)
class Reply:
    request_id: int
    worker_index: int
    payload: Any = None
    error: Optional[BaseException] = None
