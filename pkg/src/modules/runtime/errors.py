"""Errors raised by the worker runtime"""


class ProtocolError(RuntimeError):
    """A message was not answered exactly once or a partial result is missing"""
    pass


class PoolError(RuntimeError):
    """The pool cannot be spawned or used (size mismatch, shut down, resources)"""
    pass
