"""
Ordered reduction of per-worker partial results
"""
import itertools
import math
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ProtocolError

Partial = Union[float, np.ndarray]


def reduce_ordered(partials: Sequence[Optional[Partial]], expected: Optional[int] = None) -> float:
    """
    Combine one partial per worker in ascending worker index.

    A partial is either a scalar or an array of addends. The combination is an
    exactly rounded f64 summation over the concatenated addends, so the result is
    the correctly rounded total and does not depend on how the addends were
    distributed over workers.

    Args:
        partials: Partials indexed by worker; None marks a missing reply
        expected: Number of workers that must have answered

    Returns:
        The reduced value as a Python float

    Raises:
        ProtocolError: If a partial is missing
    """
    if expected is not None and len(partials) != expected:
        raise ProtocolError(f"expected {expected} partials, got {len(partials)}")
    missing = [index for index, partial in enumerate(partials) if partial is None]
    if missing:
        raise ProtocolError(f"missing partial from worker(s) {missing}")

    def addends(partial: Partial):
        if isinstance(partial, np.ndarray):
            return partial.astype(np.float64, copy=False).ravel().tolist()
        return (float(partial),)

    values = list(itertools.chain.from_iterable(addends(p) for p in partials))
    try:
        return math.fsum(values)
    except (OverflowError, ValueError):
        # overflowing or inf - inf totals come back non-finite for the caller to flag
        return float(np.sum(values))
