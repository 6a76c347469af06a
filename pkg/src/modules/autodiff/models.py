"""
Small differentiable models whose loss Hessian the engine analyzes.

Parameters are addressed by name in declaration order; the flat parameter
vector is the concatenation of each tensor in row-major order.
"""
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Mapping, Tuple

import numpy as np

from modules.sharded.precision import Precision
from .errors import DataError, ShapeError
from .functional import cross_entropy, mse_loss, softmax
from .tensor import Tensor


class Architecture(str, Enum):
    MLP = "mlp"
    ATTENTION_BLOCK = "attention_block"


class LossKind(str, Enum):
    MSE = "mse"
    CROSS_ENTROPY = "cross_entropy"


@dataclass(frozen=True)
class ModelSpec:
    architecture: Architecture = Architecture.MLP
    loss: LossKind = LossKind.MSE
    layer_widths: Tuple[int, ...] = (4, 8, 1)
    d_model: int = 8
    n_heads: int = 2
    seq_len: int = 4
    n_classes: int = 3

    def __post_init__(self):
        object.__setattr__(self, "architecture", Architecture(self.architecture))
        object.__setattr__(self, "loss", LossKind(self.loss))
        object.__setattr__(self, "layer_widths", tuple(int(w) for w in self.layer_widths))
        if self.architecture is Architecture.MLP:
            if len(self.layer_widths) < 2 or min(self.layer_widths) < 1:
                raise ShapeError(f"mlp needs at least two positive layer widths, got {self.layer_widths}")
        else:
            if min(self.d_model, self.n_heads, self.seq_len, self.n_classes) < 1:
                raise ShapeError("attention block sizes must be positive")
            if self.d_model % self.n_heads:
                raise ShapeError(f"d_model {self.d_model} is not divisible by n_heads {self.n_heads}")
        if self.loss is LossKind.MSE and self.output_width != 1:
            raise ShapeError(f"mse loss needs a single output, model has {self.output_width}")
        if self.loss is LossKind.CROSS_ENTROPY and self.output_width < 2:
            raise ShapeError("cross-entropy loss needs at least two classes")

    @property
    def input_features(self) -> int:
        if self.architecture is Architecture.MLP:
            return self.layer_widths[0]
        return self.seq_len * self.d_model

    @property
    def output_width(self) -> int:
        if self.architecture is Architecture.MLP:
            return self.layer_widths[-1]
        return self.n_classes

    def parameter_shapes(self) -> List[Tuple[str, Tuple[int, ...]]]:
        if self.architecture is Architecture.MLP:
            shapes = []
            for i, (fan_in, fan_out) in enumerate(zip(self.layer_widths, self.layer_widths[1:])):
                shapes.append((f"layer{i}.weight", (fan_in, fan_out)))
                shapes.append((f"layer{i}.bias", (fan_out,)))
            return shapes
        d = self.d_model
        return [("attn.query", (d, d)), ("attn.key", (d, d)), ("attn.value", (d, d)), ("attn.output", (d, d)),
                ("head.weight", (d, self.n_classes)), ("head.bias", (self.n_classes,))]

    @property
    def parameter_count(self) -> int:
        return sum(int(np.prod(shape)) for _, shape in self.parameter_shapes())

    def unflatten(self, flat: np.ndarray) -> "OrderedDict[str, np.ndarray]":
        flat = np.asarray(flat)
        if flat.shape != (self.parameter_count,):
            raise ShapeError(f"expected {self.parameter_count} parameters, got shape {flat.shape}")
        named, offset = OrderedDict(), 0
        for name, shape in self.parameter_shapes():
            size = int(np.prod(shape))
            named[name] = flat[offset:offset + size].reshape(shape)
            offset += size
        return named

    def flatten(self, named: Mapping[str, np.ndarray]) -> np.ndarray:
        return np.concatenate([np.asarray(named[name]).reshape(-1) for name, _ in self.parameter_shapes()])

    def init_weights(self, seed: int, dtype=np.float64) -> np.ndarray:
        """Scaled normal weights (1/sqrt(fan_in)), small normal biases"""
        rng = np.random.default_rng(seed)
        parts = []
        for name, shape in self.parameter_shapes():
            scale = 1.0 / math.sqrt(shape[0]) if len(shape) == 2 else 0.1
            parts.append(rng.normal(0.0, scale, size=shape).reshape(-1))
        return np.concatenate(parts).astype(dtype)

    def forward(self, params: Mapping[str, Tensor], inputs: np.ndarray) -> Tensor:
        inputs = np.asarray(inputs)
        if inputs.ndim != 2 or inputs.shape[1] != self.input_features:
            raise DataError(f"expected inputs of shape (B, {self.input_features}), got {inputs.shape}")
        dtype = params[self.parameter_shapes()[0][0]].dtype
        if self.architecture is Architecture.MLP:
            return self._mlp(params, Tensor(inputs.astype(dtype)))
        return self._attention(params, Tensor(inputs.astype(dtype)))

    def _mlp(self, params: Mapping[str, Tensor], h: Tensor) -> Tensor:
        layers = len(self.layer_widths) - 1
        for i in range(layers):
            h = h @ params[f"layer{i}.weight"] + params[f"layer{i}.bias"]
            if i < layers - 1:
                h = h.tanh()
        return h

    def _attention(self, params: Mapping[str, Tensor], flat_inputs: Tensor) -> Tensor:
        batch = flat_inputs.shape[0]
        s, d, heads = self.seq_len, self.d_model, self.n_heads
        head_dim = d // heads
        x = flat_inputs.reshape(batch, s, d)

        def split(t: Tensor) -> Tensor:
            return t.reshape(batch, s, heads, head_dim).permute(0, 2, 1, 3)

        q = split(x @ params["attn.query"])
        k = split(x @ params["attn.key"])
        v = split(x @ params["attn.value"])
        weights = softmax((q @ k.mT) * (1.0 / math.sqrt(head_dim)), axis=-1)
        context = (weights @ v).permute(0, 2, 1, 3).reshape(batch, s, d)
        hidden = x + context @ params["attn.output"]
        pooled = hidden.mean(axis=1)
        return pooled @ params["head.weight"] + params["head.bias"]

    def loss_value(self, params: Mapping[str, Tensor], inputs: np.ndarray, targets: np.ndarray) -> Tensor:
        output = self.forward(params, inputs)
        if self.loss is LossKind.MSE:
            return mse_loss(output, targets)
        return cross_entropy(output, targets)


@dataclass
class Model:
    """A ModelSpec with concrete weights at a given precision"""
    spec: ModelSpec
    weights: np.ndarray
    precision: Precision = Precision.F64
    label: str = field(default="model")

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=self.precision.dtype)
        if self.weights.shape != (self.spec.parameter_count,):
            raise ShapeError(f"model expects {self.spec.parameter_count} weights, got shape {self.weights.shape}")

    @classmethod
    def initialize(cls, spec: ModelSpec, seed: int = 0, precision: Precision = Precision.F64) -> "Model":
        return cls(spec, spec.init_weights(seed, precision.dtype), precision,
                   label=f"{spec.architecture.value}-{spec.loss.value}")

    @property
    def dtype(self) -> np.dtype:
        return self.precision.dtype

    @property
    def parameter_count(self) -> int:
        return self.spec.parameter_count
