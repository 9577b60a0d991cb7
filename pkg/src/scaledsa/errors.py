"""Exception types shared across the package."""


class ScaledSAError(Exception):
    """Base class for all package errors."""


class DomainError(ScaledSAError, ValueError):
    """A monomial was evaluated outside its domain of definition.

    Raised instead of propagating NaN when a coordinate paired with a
    negative or fractional exponent is not strictly positive.
    """

    def __init__(self, message, *, point=None):
        super().__init__(message)
        self.point = point


class UnsupportedGeometryError(ScaledSAError, ValueError):
    """No closed form is available for the requested set / rate combination."""


class ProfileMismatchError(ScaledSAError, ValueError):
    """Scaling profiles that must agree on (gamma, rho) do not."""


class PositivityViolationError(ScaledSAError, ValueError):
    """A multiplier that must be strictly positive was not."""

    def __init__(self, message, *, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(ScaledSAError, ValueError):
    """Malformed experiment or constraint-specification file."""
