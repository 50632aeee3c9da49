"""How well a single backward step of the conditioned walk can be detected."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from ..core.reports import CheckReport, inequality_step, info_step
from ..divergence import kl
from ..heat.arith import ZERO_THRESHOLD, support_mask
from ..walks.conditioned import ConditionedWalk
from ..walks.mixture import reversal_mixture
from ..walks.oracle import mixing_information

LOG = logging.getLogger(__name__)


def step_weight(t: int, i: int, exact: bool = False):
    """lambda_i = 1/(t - i + 1), the chance that step i reverses given no earlier step did."""
    return Fraction(1, t - i + 1) if exact else 1.0 / (t - i + 1)


@dataclass(frozen=True)
class DetectabilityProfile:
    """Per-step detectability terms of a conditioned walk.

    ``per_state[i][x]`` is D(mu_i^x || lambda_i mu_i^x + (1 - lambda_i) nu_i^x)
    for x in the support of X_i (NaN elsewhere) and ``per_step[i - 1]`` its
    expectation under X_i.
    """

    t: int
    lambdas: Tuple[float, ...]
    per_step: Tuple[float, ...]
    per_state: Dict[int, np.ndarray]

    @property
    def average(self) -> float:
        return float(np.mean(self.per_step)) if self.per_step else 0.0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "lambdas": list(self.lambdas),
            "per_step": list(self.per_step),
            "average": self.average,
        }


def backward_forward_rows(X: ConditionedWalk, i: int):
    """(mu_i, nu_i): rows of dist(X_{i-1} | X_i) and dist(X_{i+1} | X_i)."""
    return X.conditional(i, i - 1), X.conditional(i, i + 1)


def state_detectability(mu_row, nu_row, weight) -> float:
    mixed = mu_row * weight + nu_row * (1 - weight)
    return float(kl(mu_row, mixed))


def reversal_detectability(X: ConditionedWalk, t: int = None) -> DetectabilityProfile:
    """Average over i in 1..t of E_{x~X_i} D(mu_i^x || lambda_i mu_i^x + (1-lambda_i) nu_i^x)."""
    t = X.t if t is None else t
    lambdas, per_step, per_state = [], [], {}
    for i in range(1, t + 1):
        weight = step_weight(t, i, X.exact)
        mu, nu = backward_forward_rows(X, i)
        marginal = X.marginal(i)
        values = np.full(X.space.size, math.nan)
        expectation = 0.0
        for x in np.flatnonzero(support_mask(marginal, ZERO_THRESHOLD)):
            values[x] = state_detectability(mu[x], nu[x], weight)
            expectation += float(marginal[x]) * values[x]
        lambdas.append(float(weight))
        per_step.append(expectation)
        per_state[i] = values
    profile = DetectabilityProfile(t, tuple(lambdas), tuple(per_step), per_state)
    LOG.debug(f"Detectability average {profile.average} over {t} steps")
    return profile


def verify_detectability_bound(
    X: ConditionedWalk, tol: float = 1e-9, instance: str = ""
) -> CheckReport:
    """The detectability average never exceeds I(J;Z), enumerated by the trajectory oracle."""
    report = CheckReport("detectability", instance)
    profile = reversal_detectability(X)
    information = mixing_information(reversal_mixture(X))
    report.add(info_step("detectability average", profile.average, per_step=list(profile.per_step)))
    report.add(
        inequality_step("I(J;Z) >= detectability average", information, profile.average, tol)
    )
    return report
