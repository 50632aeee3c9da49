"""Custom exceptions for heatlog."""


class HeatlogError(Exception):
    """Base exception for heatlog."""

    pass


class KernelError(HeatlogError):
    """Kernel is asymmetric, negative, all-zero or otherwise malformed."""

    pass


class DimensionError(HeatlogError):
    """Vectors, kernels or distributions live on mismatched spaces."""

    pass


class SupportError(HeatlogError):
    """A distribution's support does not match the one required."""

    pass


class GuardError(HeatlogError):
    """A size guard was exceeded."""

    pass


class ZeroHeatError(HeatlogError):
    """A heat moment that must be positive is zero."""

    pass


class ParameterError(HeatlogError):
    """An operation was called outside its parameter range."""

    pass


class GadgetError(HeatlogError):
    """The second-branch construction cannot be built."""

    pass


class SourceError(HeatlogError):
    """Error occurred while reading an instance source."""

    pass


class ConfigurationError(HeatlogError):
    """Error in configuration."""

    pass


class CheckerError(HeatlogError):
    """Unknown or broken verification checker."""

    pass
