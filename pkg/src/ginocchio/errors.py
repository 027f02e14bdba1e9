"""Exception types raised across the package."""


class GinocchioError(Exception):
    """Base class for all package errors."""


class PoleError(GinocchioError, ValueError):
    """Argument sits on a pole of the Gamma function."""


class ParameterPole(GinocchioError, ValueError):
    """Lower parameter of 2F1 is a non-positive integer."""


class NoConvergence(GinocchioError, RuntimeError):
    """An iterative procedure hit its iteration cap.

    ``best`` carries whatever partial result the caller can still use.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TransformDegenerate(GinocchioError, ValueError):
    """The 1-w linear transformation of 2F1 is singular (c-a-b integral)."""


class DomainError(GinocchioError, ValueError):
    pass


class Unclassifiable(GinocchioError, ValueError):
    """Re V sign pattern fits none of barrier / well / well with side barriers."""

    def __init__(self, message, extrema=None):
        super().__init__(message)
        self.extrema = extrema or []


class NumericalOverflow(GinocchioError, OverflowError):
    pass


class TailNotDecayed(GinocchioError, ValueError):
    pass


class ResolutionError(GinocchioError, ValueError):
    pass


class NearBoundary(GinocchioError, ValueError):
    pass


class PoorFit(GinocchioError, RuntimeError):
    pass


class ConfigError(GinocchioError, ValueError):
    pass


class IllConditioned(RuntimeWarning):
    """Warning: the incident amplitude nearly vanishes (close to a singularity)."""
