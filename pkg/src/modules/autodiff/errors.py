"""Errors raised by the autodiff engine and its data loaders"""


class ShapeError(ValueError):
    """Operand shapes are incompatible (non-scalar loss, bad matmul, dimension mismatch)"""
    pass


class DataError(ValueError):
    """Batch data is empty, malformed, or inconsistent with the model"""
    pass
