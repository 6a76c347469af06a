"""
Gradient engine: topological ordering of the recorded graph and
reverse-mode accumulation.
"""
from collections import OrderedDict
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import ShapeError
from .tensor import Tensor, set_grad_enabled


def topological_order(root: Tensor) -> List[Tensor]:
    """Nodes reachable from root, every node after all of its inputs"""
    order: List[Tensor] = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node.parents:
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))
    return order


def grad(output: Tensor, inputs: Sequence[Tensor], create_graph: bool = False,
         grad_output: Optional[Tensor] = None) -> List[Tensor]:
    """
    Gradients of output with respect to inputs.

    Args:
        output: Scalar tensor unless grad_output is given
        inputs: Tensors to differentiate with respect to
        create_graph: Record the backward pass so the result can be differentiated again
        grad_output: Seed gradient; defaults to ones for a scalar output

    Returns:
        One gradient per input; inputs the output does not depend on get zeros
    """
    if grad_output is None:
        if output.data.size != 1:
            raise ShapeError(f"grad needs a scalar output, got shape {output.shape}")
        grad_output = Tensor(np.ones_like(output.data))

    grads: Dict[int, Tensor] = {id(output): grad_output}
    if output.requires_grad:
        with set_grad_enabled(create_graph):
            for node in reversed(topological_order(output)):
                upstream = grads.get(id(node))
                if upstream is None or node.backward_fn is None:
                    continue
                for parent, contribution in zip(node.parents, node.backward_fn(upstream, node)):
                    if contribution is None or not parent.requires_grad:
                        continue
                    key = id(parent)
                    grads[key] = grads[key] + contribution if key in grads else contribution

    results = []
    for tensor in inputs:
        found = grads.get(id(tensor))
        results.append(found if found is not None else Tensor(np.zeros_like(tensor.data)))
    return results


class AutodiffGraph:
    """
    Named parameter leaves plus the graphs built from them.

    retains_graph keeps the backward pass recorded so gradients can be
    differentiated a second time (needed for Hessian-vector products).
    """

    def __init__(self, parameters: Mapping[str, Union[np.ndarray, Tensor]], retains_graph: bool = False):
        self.retains_graph = retains_graph
        self.parameters: "OrderedDict[str, Tensor]" = OrderedDict()
        for name, value in parameters.items():
            data = value.data if isinstance(value, Tensor) else value
            self.parameters[name] = Tensor(data, requires_grad=True, name=name)

    def zero_grad(self) -> None:
        """Replace every leaf with a fresh one so no earlier graph is reachable"""
        for name, leaf in self.parameters.items():
            self.parameters[name] = Tensor(leaf.data, requires_grad=True, name=name)

    def nodes(self, output: Tensor) -> List[Tensor]:
        return topological_order(output)

    def grad(self, output: Tensor) -> "OrderedDict[str, Tensor]":
        names = list(self.parameters)
        values = grad(output, [self.parameters[n] for n in names], create_graph=self.retains_graph)
        return OrderedDict(zip(names, values))
