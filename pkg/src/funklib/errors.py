"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """Input violates a documented precondition (parity, range, support)."""


class RangeConditionError(PreconditionError):
    """Data is not in the range of the great-circle transform.

    ``odd_degrees`` lists the degrees carrying the offending odd-degree energy.
    """

    def __init__(self, message: str, odd_degrees=()):
        super().__init__(message)
        self.odd_degrees = list(odd_degrees)


class ConvexityError(PreconditionError):
    """A support function failed the ``h + h'' > 0`` certificate."""

    def __init__(self, message: str, pole=None, phi=None, value=None):
        super().__init__(message)
        self.pole = pole
        self.phi = phi
        self.value = value
