"""Constants of the near-log-convexity dichotomy as functions of epsilon."""

import math

from ..core.exceptions import ParameterError

EPSILON_FLOOR = 7 / 8
DEFAULT_EPSILON = 0.95


def require_epsilon(epsilon: float) -> float:
    if not EPSILON_FLOOR < epsilon <= 1:
        raise ParameterError(f"epsilon must lie in (7/8, 1], got {epsilon}")
    return epsilon


def gamma_for(epsilon: float) -> float:
    """gamma = 1 - 8(1 - epsilon)."""
    return 1 - 8 * (1 - require_epsilon(epsilon))


def delta_for(epsilon: float) -> float:
    """delta = gamma^2 / 48 = 4/3 (epsilon - 7/8)^2, clamped to (0, 1]."""
    return min(gamma_for(epsilon) ** 2 / 48, 1.0)


def threshold_for(epsilon: float, t: int) -> float:
    """Per-state detectability threshold 8(1 - epsilon) log t."""
    return 8 * (1 - require_epsilon(epsilon)) * math.log2(t)


def default_alphas(epsilon: float = DEFAULT_EPSILON):
    """(alpha1, alpha2) = (1 - epsilon, delta(epsilon))."""
    return 1 - epsilon, delta_for(epsilon)
