"""Errors raised while turning tridiagonal matrices into spectral measures"""


class QuadratureError(ArithmeticError):
    """The tridiagonal eigenproblem could not be solved to the required accuracy"""
    pass


class EmptySpectrumError(ValueError):
    """An operation needs at least one Ritz pair or one run"""
    pass
