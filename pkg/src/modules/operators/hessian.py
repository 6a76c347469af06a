"""Loss Hessian of a model over a dataset, applied by double backward"""
from typing import Iterable, Optional

from modules.autodiff.data import Batch, check_batches
from modules.autodiff.hvp import batched_hvp
from modules.autodiff.models import Model
from modules.runtime.executor import ShardExecutor
from modules.sharded.vector import ShardedVector
from .base import OperatorHandle


def hessian_operator(model: Model, loader: Iterable[Batch],
                     executor: Optional[ShardExecutor] = None) -> OperatorHandle:
    batches = check_batches(loader)

    def apply(v: ShardedVector) -> ShardedVector:
        return batched_hvp(model, batches, v, executor)

    samples = sum(b.size for b in batches)
    return OperatorHandle(dim=model.parameter_count, apply=apply,
                          label=f"hessian[{model.label}, {samples} samples]")
