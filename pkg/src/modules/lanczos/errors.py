"""Errors raised by the Lanczos driver"""


class LanczosConfigError(ValueError):
    """Lanczos settings are out of range"""
    pass


class LanczosBreakdownError(ArithmeticError):
    """
    A recurrence coefficient became non-finite.
    The coefficients computed before the failure are attached.
    """

    def __init__(self, message: str, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics


class BasisUnavailableError(RuntimeError):
    """A diagnostic needs the Lanczos basis but the run did not store it"""
    pass
