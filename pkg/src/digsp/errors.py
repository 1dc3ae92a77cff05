"""Exception types shared across the package."""


class DigspError(Exception):
    """Base class for all package errors."""


class ValidationError(DigspError):
    """Input data violates a documented precondition (shape, finiteness, format)."""


class NumericalError(DigspError):
    """A computed result failed its residual or tolerance check."""
