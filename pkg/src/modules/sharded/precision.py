"""Element precision of sharded vectors and model tensors"""
from enum import Enum

import numpy as np


class Precision(str, Enum):
    F32 = "f32"
    F64 = "f64"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float32) if self is Precision.F32 else np.dtype(np.float64)

    @property
    def unit_roundoff(self) -> float:
        """Half the spacing of representable numbers at 1"""
        return 2.0 ** -24 if self is Precision.F32 else 2.0 ** -53

    @property
    def machine_epsilon(self) -> float:
        """Spacing of representable numbers at 1"""
        return 2.0 * self.unit_roundoff

    @classmethod
    def from_dtype(cls, dtype) -> "Precision":
        return cls.F32 if np.dtype(dtype) == np.float32 else cls.F64
