"""Semantic exceptions raised by the density, transform and measure layers."""


class DescortError(Exception):
    """Base class for all package errors."""


class SchemaError(DescortError, ValueError):
    """A density specification (JSON or constructor arguments) is invalid."""


class NonNormalized(DescortError):
    """Total probability of a supplied density is too far from one."""


class DivergentMoment(DescortError):
    """A requested entropic moment (or entropy built on it) diverges."""


class Divergent(DescortError):
    """Quadrature failed to converge on a required integral."""


class TransformFailed(DescortError):
    """The numeric transform path failed; carries the offending interval."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class NotInvertible(DescortError):
    """Inverse transform requested for the non-invertible alpha = 0 case."""


class DivergentMap(DescortError):
    """The cumulative map was evaluated at an endpoint where it diverges."""


class CompactSupport(DescortError):
    """Tail estimation requested for a density with bounded support."""


class PoorFit(DescortError):
    """The tail regression did not reach the required goodness of fit."""

    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit


class InvalidBeta(DescortError, ValueError):
    """Tail classification needs a decay exponent greater than one."""


class Unsupported(DescortError):
    """The operation is undefined for this density variant."""
