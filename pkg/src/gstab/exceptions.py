"""Exception types raised across the package."""


class GStabError(Exception):
    """Base class for every error raised by gstab."""


class UndefinedDifference(GStabError, ArithmeticError):
    """An extended-real subtraction with a -inf subtrahend."""


class DimensionMismatch(GStabError, ValueError):
    pass


class EmptyRegion(GStabError, ValueError):
    """No sample point survived the region and exclusion filters."""


class NonFiniteOutput(GStabError, ArithmeticError):
    """A map or function produced NaN or +inf."""


class InsufficientSamples(GStabError, ValueError):
    pass


class NoFeasibleLambda(GStabError, ValueError):
    pass


class DimensionTooHigh(GStabError, ValueError):
    pass


class ExpressionError(GStabError, ValueError):
    pass


class ConfigError(GStabError, ValueError):
    """Invalid run configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
