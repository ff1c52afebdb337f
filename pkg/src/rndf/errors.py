"""Exception types shared across the package."""


class RNDFError(Exception):
    """Base class for package errors."""


class ConfigError(RNDFError, ValueError):
    """Invalid configuration or argument."""


class DomainError(RNDFError, ValueError):
    """Argument outside the domain of a function (for example h = 0)."""


class CapacityError(RNDFError):
    """Requested accuracy needs more terms than the configured budget."""


class ClassError(RNDFError, ValueError):
    """Operation applied to a rational point of the wrong class."""


class NoConvergenceError(RNDFError):
    """A fit or an iteration did not settle."""


class PrecisionExhaustedError(RNDFError):
    """Input digits cannot certify the next result."""


class RangeError(RNDFError, ValueError):
    """Argument outside a supported range."""


class DegenerateError(RNDFError):
    """All sampled increments vanish at the working precision."""


class InconclusiveError(RNDFError):
    """Evidence is insufficient for a verdict at the working precision."""


class ResolutionError(RNDFError):
    """Sampling is too coarse for the requested scale."""


class NumericError(RNDFError):
    """Non-finite value or quadrature failure."""


class ValidityError(RNDFError, ValueError):
    """Offset outside the validity radius of an expansion."""
