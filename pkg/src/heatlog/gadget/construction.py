"""The mixture walks W and Y and the analysis walks X-check built from the bridges."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from ..core.exceptions import DimensionError, GadgetError
from ..walks.conditioned import ConditionedWalk
from ..walks.markov import MarkovWalk, bayes_reverse, empty_matrix, one
from ..walks.mixture import WalkMixture
from .bridges import BridgeFamily
from .steps import GoodSteps

LOG = logging.getLogger(__name__)


def _ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    out = numerator * 0
    for x, value in enumerate(denominator):
        if value != 0:
            out[x] = numerator[x] / value
    return out


def doob_prefix(X: MarkovWalk, step: int, target: np.ndarray) -> List[np.ndarray]:
    """Kernels for steps X.start..step-1 of X tilted so that its law at ``step`` is ``target``.

    With phi_step = target / X_step and phi_s = K_s phi_{s+1}, the tilted kernel
    is K_s(x, y) phi_{s+1}(y) / phi_s(x); rows where phi_s vanishes go to the dump.
    """
    marginal = X.marginal(step)
    for x, mass in enumerate(target):
        if mass != 0 and marginal[x] == 0:
            raise DimensionError(f"Target charges state {x}, unreachable at step {step}")
    exact = X.exact
    space = X.space
    phi = _ratio(target, marginal)
    kernels = []
    for s in range(step - 1, X.start - 1, -1):
        kernel = X.conditional(s, s + 1)
        phi_now = kernel.dot(phi)
        tilted = empty_matrix(space.size, exact)
        for x in range(space.size):
            if phi_now[x] != 0:
                tilted[x] = kernel[x] * phi / phi_now[x]
            else:
                tilted[x, space.dump_index] = one(exact)
        kernels.append(tilted)
        phi = phi_now
    kernels.reverse()
    return kernels


def bridge_matrix(family: BridgeFamily, k: int, law: np.ndarray, exact: bool) -> np.ndarray:
    """Rows x -> pi_k^x on the support of X'_k; other rows fall to the dump."""
    space_size = len(law)
    matrix = empty_matrix(space_size, exact)
    dump = space_size - 1
    for x in range(space_size):
        matrix[x, dump] = one(exact)
    for bridge in family.for_step(k):
        if bridge.pi is None:
            raise GadgetError(f"Bridge at step {k}, state {bridge.state} has a null psi")
        matrix[bridge.state] = bridge.pi
    return matrix


@dataclass
class GadgetWalks:
    """Per good step k: W|K=k on -1..t+3, Y|K=k on -1..t-1 and X-check^k on -1..t+1."""

    X: ConditionedWalk
    good: GoodSteps
    family: BridgeFamily
    W: WalkMixture
    Y: WalkMixture
    checks: Dict[int, MarkovWalk]
    bridge_laws: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def steps(self) -> Tuple[int, ...]:
        return self.good.steps

    def component_w(self, k: int) -> MarkovWalk:
        return self.W.component(k)

    def component_y(self, k: int) -> MarkovWalk:
        return self.Y.component(k)


def w_kernels(X: ConditionedWalk, k: int, law: np.ndarray, matrix: np.ndarray):
    """X tilted to X'_k up to step k, x -> p -> x' through the bridge, then X from step k."""
    t = X.t
    bridge_law = np.dot(law, matrix)
    kernels = doob_prefix(X, k, law)
    kernels.append(matrix)
    kernels.append(bayes_reverse(law, matrix, bridge_law))
    kernels.extend(X.conditional(s - 2, s - 1) for s in range(k + 2, t + 3))
    return kernels, bridge_law


def y_kernels(X: ConditionedWalk, k: int, bridge_law: np.ndarray) -> List[np.ndarray]:
    """X tilted to P_k up to step k-1, then X resumed from step k+1."""
    kernels = doob_prefix(X, k - 1, bridge_law)
    kernels.extend(X.conditional(s + 2, s + 3) for s in range(k - 1, X.t - 1))
    return kernels


def check_kernels(X: ConditionedWalk, k: int, law: np.ndarray) -> List[np.ndarray]:
    kernels = doob_prefix(X, k, law)
    kernels.extend(X.conditional(s, s + 1) for s in range(k, X.t + 1))
    return kernels


def build_gadget_walks(X: ConditionedWalk, good: GoodSteps, family: BridgeFamily) -> GadgetWalks:
    """Materialize W, Y and X-check^k as kernel-level walks, mixed uniformly over the good steps."""
    if not good.steps:
        raise GadgetError("No good steps; the gadget needs a nonempty T")
    if family.degenerate:
        where = ", ".join(f"({b.step}, {b.state})" for b in family.degenerate)
        raise GadgetError(f"Bridges condition on null sets at {where}")

    exact = X.exact
    weight = Fraction(1, len(good.steps)) if exact else 1.0 / len(good.steps)
    w_parts, y_parts, checks, laws = [], [], {}, {}
    for k in good.steps:
        law = good.conditioned[k]
        matrix = bridge_matrix(family, k, law, exact)
        kernels, bridge_law = w_kernels(X, k, law, matrix)
        laws[k] = bridge_law
        w_parts.append(
            (weight, MarkovWalk(X.space, -1, X.t + 3, X.initial, kernels, name=f"W|K={k}"))
        )
        y_parts.append(
            (
                weight,
                MarkovWalk(
                    X.space, -1, X.t - 1, X.initial, y_kernels(X, k, bridge_law), name=f"Y|K={k}"
                ),
            )
        )
        checks[k] = MarkovWalk(
            X.space, -1, X.t + 1, X.initial, check_kernels(X, k, law), name=f"Xcheck^{k}"
        )
    labels = list(good.steps)
    LOG.debug(f"Built gadget walks for steps {labels}")
    return GadgetWalks(
        X,
        good,
        family,
        WalkMixture(w_parts, "K", labels),
        WalkMixture(y_parts, "K", labels),
        checks,
        laws,
    )
