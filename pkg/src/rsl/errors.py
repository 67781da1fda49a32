"""Exception types shared across the package."""


class RslError(Exception):
    """Base class for errors raised by rsl."""


class PreconditionError(RslError, ValueError):
    """An argument violates the documented precondition of an operation."""


class BudgetExceeded(RslError):
    """An enumeration or search would exceed its configured work budget."""


class ConstructionError(RslError):
    """An internal consistency check failed; indicates a bug, never bad input."""
