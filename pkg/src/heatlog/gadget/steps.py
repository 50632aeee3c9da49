"""Good time steps: where a backward step is hard to detect for most states."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

import numpy as np

from ..core.exceptions import DimensionError, ParameterError
from ..heat.arith import is_exact
from ..walks.conditioned import ConditionedWalk
from .detectability import DetectabilityProfile, reversal_detectability, step_weight
from .params import DEFAULT_EPSILON, gamma_for, require_epsilon, threshold_for

LOG = logging.getLogger(__name__)

MARKOV_LEVEL = 0.5


@dataclass(frozen=True)
class FirstBranch:
    """The detectability average already reaches (1 - epsilon) log t."""

    epsilon: float
    t: int
    average: float
    target: float

    def to_dict(self) -> dict:
        return {
            "branch": 1,
            "epsilon": self.epsilon,
            "t": self.t,
            "average": self.average,
            "target": self.target,
        }


@dataclass(frozen=True)
class GoodSteps:
    """Steps k <= ceil(t/2) whose detectability exceeds the threshold with probability < 1/2.

    ``conditioned[k]`` is X'_k, the law of X_k restricted to states below the
    threshold, and ``exceedance[k]`` the probability of the complement.
    """

    epsilon: float
    t: int
    threshold: float
    gamma: float
    steps: Tuple[int, ...]
    conditioned: Dict[int, np.ndarray]
    exceedance: Dict[int, float]
    profile: DetectabilityProfile = field(repr=False)

    @property
    def quota(self) -> int:
        return self.t // 4

    @property
    def meets_quota(self) -> bool:
        return len(self.steps) >= self.quota

    def weight(self, k: int, exact: bool = False):
        return step_weight(self.t, k, exact)

    def rank(self, k: int) -> int:
        """Position of k when the steps are sorted in decreasing order, from 1."""
        return sorted(self.steps, reverse=True).index(k) + 1

    def to_dict(self) -> dict:
        return {
            "branch": 2,
            "epsilon": self.epsilon,
            "t": self.t,
            "threshold": self.threshold,
            "gamma": self.gamma,
            "steps": list(self.steps),
            "quota": self.quota,
            "exceedance": {str(k): v for k, v in self.exceedance.items()},
        }


def _restrict(marginal: np.ndarray, keep: np.ndarray) -> np.ndarray:
    if is_exact(marginal):
        mass = np.array([m if k else 0 * m for m, k in zip(marginal, keep)], dtype=object)
    else:
        mass = np.where(keep, marginal, 0.0)
    total = mass.sum()
    if not total > 0:
        raise DimensionError("Restricting a step marginal to a null set")
    return mass / total


def good_steps(
    X: ConditionedWalk, t: int = None, epsilon: float = DEFAULT_EPSILON
) -> Union[GoodSteps, FirstBranch]:
    """Evaluate the per-step exceedance probability directly for every i <= ceil(t/2)."""
    t = X.t if t is None else t
    require_epsilon(epsilon)
    if t < 2:
        raise ParameterError(f"Good steps need t >= 2, got {t}")

    profile = reversal_detectability(X, t)
    target = (1 - epsilon) * math.log2(t)
    if profile.average >= target:
        LOG.info(f"Detectability average {profile.average:.6g} >= {target:.6g}: first branch")
        return FirstBranch(epsilon, t, profile.average, target)

    threshold = threshold_for(epsilon, t)
    steps, conditioned, exceedance = [], {}, {}
    for i in range(1, math.ceil(t / 2) + 1):
        marginal = X.marginal(i)
        values = profile.per_state[i]
        above = np.nan_to_num(values, nan=-math.inf) >= threshold
        probability = float(sum(float(marginal[x]) for x in np.flatnonzero(above)))
        exceedance[i] = probability
        if probability < MARKOV_LEVEL:
            below = np.nan_to_num(values, nan=math.inf) < threshold
            steps.append(i)
            conditioned[i] = _restrict(marginal, below)

    good = GoodSteps(
        epsilon,
        t,
        threshold,
        gamma_for(epsilon),
        tuple(steps),
        conditioned,
        exceedance,
        profile,
    )
    if not good.meets_quota:
        LOG.warning(f"Only {len(steps)} good steps, fewer than floor(t/4) = {good.quota}")
    LOG.debug(f"Good steps {steps} at threshold {threshold:.6g}")
    return good
