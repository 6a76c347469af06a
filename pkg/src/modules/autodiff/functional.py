"""Softmax and loss functions built from Tensor ops"""
import numpy as np

from .errors import DataError, ShapeError
from .tensor import Tensor


def _shift(x: Tensor, axis: int) -> Tensor:
    # max shift is a constant: softmax is invariant to it
    return Tensor(np.max(x.data, axis=axis, keepdims=True))


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    e = (x - _shift(x, axis)).exp()
    return e / e.sum(axis=axis, keepdims=True)


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    z = x - _shift(x, axis)
    return z - z.exp().sum(axis=axis, keepdims=True).log()


def mse_loss(prediction: Tensor, targets: np.ndarray) -> Tensor:
    """Mean squared error for a (B, 1) prediction against B targets"""
    target = Tensor(np.asarray(targets, dtype=prediction.dtype).reshape(prediction.shape[0], -1))
    if target.shape != prediction.shape:
        raise ShapeError(f"target shape {target.shape} does not match prediction {prediction.shape}")
    diff = prediction - target
    return (diff * diff).mean()


def cross_entropy(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Mean negative log-likelihood of integer class targets"""
    batch, classes = logits.shape
    labels = np.asarray(targets)
    if labels.shape != (batch,):
        raise ShapeError(f"expected {batch} class labels, got shape {labels.shape}")
    if not np.all(np.equal(np.mod(labels, 1), 0)) or labels.min() < 0 or labels.max() >= classes:
        raise DataError(f"class labels must be integers in [0, {classes})")
    onehot = np.zeros((batch, classes), dtype=logits.dtype)
    onehot[np.arange(batch), labels.astype(np.int64)] = 1.0
    return -(Tensor(onehot) * log_softmax(logits, axis=-1)).sum(axis=-1).mean()
