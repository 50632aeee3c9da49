"""heatlog - verification toolkit for heat moments of nonnegative symmetric kernels."""

from .core.registry import get_checkers
from .heat import Instance, MomentSequence, moment_sequence

__version__ = "1.0.0"
__all__ = ["get_checkers", "Instance", "MomentSequence", "moment_sequence"]
