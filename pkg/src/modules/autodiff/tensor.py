"""
Tensor with reverse-mode differentiation.

Every backward rule is written with Tensor operations, so when gradients are
computed with the graph enabled they are themselves differentiable
(grad-of-grad). Grad mode is thread-local: separate graphs may be built and
differentiated concurrently on different threads.
"""
import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ShapeError

_state = threading.local()

BackwardFn = Callable[["Tensor", "Tensor"], Tuple[Optional["Tensor"], ...]]
Operand = Union["Tensor", float, int, np.ndarray]


def is_grad_enabled() -> bool:
    return getattr(_state, "enabled", True)


@contextmanager
def set_grad_enabled(mode: bool) -> Iterator[None]:
    previous = is_grad_enabled()
    _state.enabled = mode
    try:
        yield
    finally:
        _state.enabled = previous


def no_grad():
    return set_grad_enabled(False)


class Tensor:
    # ndarray binary operators defer to Tensor
    __array_priority__ = 100

    def __init__(self, data, requires_grad: bool = False, dtype=None, name: Optional[str] = None):
        array = np.array(data, dtype=dtype) if dtype is not None else np.asarray(data)
        if array.dtype.kind != "f":
            array = array.astype(np.float64)
        self.data: np.ndarray = array
        self.requires_grad = requires_grad
        self.parents: Tuple["Tensor", ...] = ()
        self.backward_fn: Optional[BackwardFn] = None
        self.op = "leaf"
        self.name = name

    def __repr__(self):
        label = f", name={self.name}" if self.name else ""
        return f"Tensor(shape={self.shape}, op={self.op}, requires_grad={self.requires_grad}{label})"

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self) -> np.dtype:
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return self.backward_fn is None

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float(self.data)

    def _lift(self, other: Operand) -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.dtype))

    def _derive(self, data: np.ndarray, parents: Sequence["Tensor"], op: str, backward: BackwardFn) -> "Tensor":
        out = Tensor(data)
        if is_grad_enabled() and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out.parents = tuple(parents)
            out.backward_fn = backward
            out.op = op
        return out

    # arithmetic

    def __add__(self, other: Operand) -> "Tensor":
        other = self._lift(other)
        return self._derive(self.data + other.data, (self, other), "add",
                            lambda g, out: (g.sum_to(self.shape), g.sum_to(other.shape)))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Tensor":
        other = self._lift(other)
        return self._derive(self.data - other.data, (self, other), "sub",
                            lambda g, out: (g.sum_to(self.shape), (-g).sum_to(other.shape)))

    def __rsub__(self, other: Operand) -> "Tensor":
        return self._lift(other) - self

    def __neg__(self) -> "Tensor":
        return self._derive(-self.data, (self,), "neg", lambda g, out: (-g,))

    def __mul__(self, other: Operand) -> "Tensor":
        other = self._lift(other)
        return self._derive(self.data * other.data, (self, other), "mul",
                            lambda g, out: ((g * other).sum_to(self.shape), (g * self).sum_to(other.shape)))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "Tensor":
        other = self._lift(other)
        return self._derive(self.data / other.data, (self, other), "div",
                            lambda g, out: ((g / other).sum_to(self.shape),
                                            (-(g * out) / other).sum_to(other.shape)))

    def __rtruediv__(self, other: Operand) -> "Tensor":
        return self._lift(other) / self

    def __matmul__(self, other: "Tensor") -> "Tensor":
        other = self._lift(other)
        if self.ndim < 2 or other.ndim < 2:
            raise ShapeError(f"matmul needs operands with at least 2 dims, got {self.shape} and {other.shape}")
        if self.shape[-1] != other.shape[-2]:
            raise ShapeError(f"matmul shape mismatch: {self.shape} @ {other.shape}")
        return self._derive(np.matmul(self.data, other.data), (self, other), "matmul",
                            lambda g, out: ((g @ other.mT).sum_to(self.shape),
                                            (self.mT @ g).sum_to(other.shape)))

    # elementwise functions

    def tanh(self) -> "Tensor":
        return self._derive(np.tanh(self.data), (self,), "tanh", lambda g, out: (g * (1.0 - out * out),))

    def exp(self) -> "Tensor":
        return self._derive(np.exp(self.data), (self,), "exp", lambda g, out: (g * out,))

    def log(self) -> "Tensor":
        return self._derive(np.log(self.data), (self,), "log", lambda g, out: (g / self,))

    # shape manipulation

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        original = self.shape
        return self._derive(self.data.reshape(shape), (self,), "reshape", lambda g, out: (g.reshape(original),))

    def permute(self, *axes) -> "Tensor":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        inverse = tuple(int(i) for i in np.argsort(axes))
        return self._derive(np.transpose(self.data, axes), (self,), "permute",
                            lambda g, out: (g.permute(inverse),))

    @property
    def mT(self) -> "Tensor":
        """Swap the last two axes"""
        axes = list(range(self.ndim))
        axes[-1], axes[-2] = axes[-2], axes[-1]
        return self.permute(axes)

    def broadcast_to(self, shape: Tuple[int, ...]) -> "Tensor":
        shape = tuple(shape)
        if shape == self.shape:
            return self
        original = self.shape
        return self._derive(np.broadcast_to(self.data, shape).copy(), (self,), "broadcast_to",
                            lambda g, out: (g.sum_to(original),))

    def sum_to(self, shape: Tuple[int, ...]) -> "Tensor":
        """Sum over broadcast axes so the result has the given shape"""
        shape = tuple(shape)
        if self.shape == shape:
            return self
        lead = self.ndim - len(shape)
        if lead < 0:
            raise ShapeError(f"cannot sum shape {self.shape} down to {shape}")
        axes = tuple(range(lead)) + tuple(
            lead + i for i, size in enumerate(shape) if size == 1 and self.shape[lead + i] != 1)
        reduced = self.sum(axis=axes, keepdims=True) if axes else self
        return reduced.reshape(shape) if reduced.shape != shape else reduced

    # reductions

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        kept_shape = np.sum(self.data, axis=axis, keepdims=True).shape
        original = self.shape
        return self._derive(np.sum(self.data, axis=axis, keepdims=keepdims), (self,), "sum",
                            lambda g, out: (g.reshape(kept_shape).broadcast_to(original),))

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        total = self.sum(axis=axis, keepdims=keepdims)
        count = self.data.size // max(total.data.size, 1)
        return total / float(count)
