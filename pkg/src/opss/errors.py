"""Exception types shared across the package."""


class OpssError(Exception):
    """Base class for all errors raised by :mod:`opss`."""


class ValidationError(OpssError, ValueError):
    """Raised when an argument or input file violates a precondition."""


class CapacityError(OpssError):
    """Raised when an exhaustive computation would exceed its configured cap."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class AssumptionWarning(UserWarning):
    """Emitted when a theorem hypothesis is not met but the run proceeds."""
