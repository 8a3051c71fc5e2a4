"""Exception types raised by the cone/sphere volume routines."""


class ConeSphereError(ValueError):
    """Base class for all library errors."""


class InvalidInputError(ConeSphereError):
    """Geometry or argument outside the accepted domain."""


class DegenerateError(ConeSphereError):
    """A formula was asked to evaluate at a degenerate configuration
    (concentric circles, a pole of an elliptic characteristic, ...)."""


class ConditioningError(ConeSphereError):
    """The elliptic reduction is numerically ill-conditioned here.

    The dispatcher catches this and falls back to slice quadrature.
    """


class WrongCaseError(ConeSphereError):
    """A case-specific routine received geometry from another case."""
