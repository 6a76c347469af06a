"""Errors raised by sharded vector storage and arithmetic"""


class LayoutError(ValueError):
    """Shard layout is invalid or two vectors do not share layout and precision"""
    pass


class ProbeIndexError(IndexError):
    """A one-hot probe or column index lies outside [0, P)"""
    pass


class ArgumentError(ValueError):
    """A scalar argument is not usable (e.g. non-finite scale factor)"""
    pass
