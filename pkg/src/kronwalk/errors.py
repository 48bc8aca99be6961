"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class CapacityExceeded(RuntimeError):
    """Requested object is too large to index or materialize."""


class NumericalFailure(ArithmeticError):
    pass


class SingularFormula(ArithmeticError):
    """A closed-form expression is singular at the requested parameters.

    ``fallback`` names the formula callers should use instead.
    """

    def __init__(self, message: str, fallback: str | None = None):
        super().__init__(message)
        self.fallback = fallback


class NotStronglyRegular(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class DegenerateSRG(ValueError):
    """Graph has no nonadjacent pair, so the SRG parameter mu is undefined."""
