"""Good steps, bridges and the mixture walks behind the near-log-convexity dichotomy."""

from .bridges import Bridge, BridgeFamily, bridge_diagnostic, bridge_minimizer, bridges
from .budget import divergence_budget
from .construction import GadgetWalks, build_gadget_walks, doob_prefix
from .cost import verify_gadget_cost
from .detectability import (
    DetectabilityProfile,
    reversal_detectability,
    verify_detectability_bound,
)
from .dichotomy import main_dichotomy
from .params import DEFAULT_EPSILON, default_alphas, delta_for, gamma_for
from .steps import FirstBranch, GoodSteps, good_steps

__all__ = [
    "Bridge",
    "BridgeFamily",
    "bridge_diagnostic",
    "bridge_minimizer",
    "bridges",
    "divergence_budget",
    "GadgetWalks",
    "build_gadget_walks",
    "doob_prefix",
    "verify_gadget_cost",
    "DetectabilityProfile",
    "reversal_detectability",
    "verify_detectability_bound",
    "main_dichotomy",
    "DEFAULT_EPSILON",
    "default_alphas",
    "delta_for",
    "gamma_for",
    "FirstBranch",
    "GoodSteps",
    "good_steps",
]
