"""
Hessian-vector products by double backward.

The gradient is built with its own graph retained, contracted with the
probe direction, and differentiated once more. Each batch gets fresh
parameter leaves so no graph or gradient carries over between batches.
"""
from typing import Callable, Iterable, List, Mapping, Optional

import numpy as np

from modules.runtime.executor import ShardExecutor
from modules.sharded.arithmetic import gather, scatter
from modules.sharded.vector import ShardedVector
from .data import Batch, check_batches
from .errors import ShapeError
from .graph import AutodiffGraph, grad
from .models import Model
from .tensor import Tensor


def loss_hvp(loss_fn: Callable[[Mapping[str, Tensor]], Tensor],
             params: Mapping[str, np.ndarray], direction: Mapping[str, np.ndarray]) -> "dict[str, np.ndarray]":
    """
    Generic Pearlmutter product H v for a scalar loss of named parameters.

    Args:
        loss_fn: Builds the scalar loss from parameter tensors
        params: Point at which the Hessian is taken
        direction: v, one array per parameter with matching shape

    Returns:
        H v as one array per parameter
    """
    graph = AutodiffGraph(params, retains_graph=True)
    gradients = graph.grad(loss_fn(graph.parameters))
    contraction: Optional[Tensor] = None
    for name, g in gradients.items():
        v = np.asarray(direction[name])
        if v.shape != g.shape:
            raise ShapeError(f"direction for '{name}' has shape {v.shape}, parameter has {g.shape}")
        term = (g * Tensor(v.astype(g.dtype))).sum()
        contraction = term if contraction is None else contraction + term
    leaves = list(graph.parameters.values())
    products = grad(contraction, leaves, create_graph=False)
    return {name: t.data for name, t in zip(graph.parameters, products)}


def loss_gradient(model: Model, batch: Batch) -> np.ndarray:
    """Flat gradient of the mean batch loss"""
    graph = AutodiffGraph(model.spec.unflatten(model.weights))
    loss = model.spec.loss_value(graph.parameters, batch.inputs, batch.targets)
    return model.spec.flatten({n: t.data for n, t in graph.grad(loss).items()})


def loss_at(model: Model, batch: Batch, weights: Optional[np.ndarray] = None) -> float:
    flat = model.weights if weights is None else np.asarray(weights, dtype=model.dtype)
    params = {n: Tensor(a) for n, a in model.spec.unflatten(flat).items()}
    return model.spec.loss_value(params, batch.inputs, batch.targets).item()


def _dense_hvp(model: Model, batch: Batch, direction: np.ndarray) -> np.ndarray:
    spec = model.spec
    product = loss_hvp(lambda params: spec.loss_value(params, batch.inputs, batch.targets),
                       spec.unflatten(model.weights), spec.unflatten(direction))
    return spec.flatten(product)


def _gather_direction(model: Model, v: ShardedVector, executor: Optional[ShardExecutor]) -> np.ndarray:
    if v.dim != model.parameter_count:
        raise ShapeError(f"direction has dimension {v.dim}, model has {model.parameter_count} parameters")
    return gather(v, executor, dtype=model.dtype)


def hvp(model: Model, batch: Batch, v: ShardedVector, executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """H v for the mean loss over one batch, returned in v's layout and dtype"""
    direction = _gather_direction(model, v, executor)
    return scatter(_dense_hvp(model, batch, direction), v.layout, v.dtype, executor)


def batched_hvp(model: Model, loader: Iterable[Batch], v: ShardedVector,
                executor: Optional[ShardExecutor] = None) -> ShardedVector:
    """
    H v for the mean loss over the whole dataset: per-batch products
    weighted by batch size and divided by the total sample count.
    """
    batches: List[Batch] = check_batches(loader)
    if batches[0].features != model.spec.input_features:
        raise ShapeError(f"batches have {batches[0].features} features, model expects {model.spec.input_features}")
    direction = _gather_direction(model, v, executor)
    total = np.zeros(model.parameter_count, dtype=model.dtype)
    count = 0
    for batch in batches:
        total += _dense_hvp(model, batch, direction) * model.dtype.type(batch.size)
        count += batch.size
    return scatter(total / model.dtype.type(count), v.layout, v.dtype, executor)
