"""Exception types shared across the package."""


class CloningError(Exception):
    """Base class for errors raised by asymclone."""


class ArgumentError(CloningError, ValueError):
    """Invalid input: bad dimensions, weights, indices or ranges."""


class SizeError(CloningError, ValueError):
    """A requested operator or state exceeds the configured size cap."""


class ValidationError(CloningError, ValueError):
    """A supplied object violates a required structural property."""


class NumericalFailure(CloningError, ArithmeticError):
    """An iterative routine failed to converge or a cross-check disagreed.

    ``residual`` carries the offending quantity when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
