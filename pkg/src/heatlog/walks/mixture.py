"""Mixtures of walks and the reversal mixture Z."""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionError
from ..divergence import DivergenceValue, zero
from ..heat.arith import is_exact
from .conditioned import ConditionedWalk
from .markov import MarkovWalk, walk_divergence

LOG = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12


class WalkMixture:
    """A finite mixture of walks over a labelled mixing variable."""

    def __init__(
        self,
        components: Sequence[Tuple[object, MarkovWalk]],
        variable: str = "J",
        labels: Optional[Sequence] = None,
    ):
        if not components:
            raise DimensionError("A mixture needs at least one component")
        self.components: List[Tuple[object, MarkovWalk]] = list(components)
        self.variable = variable
        self.labels = list(labels) if labels is not None else list(range(1, len(components) + 1))
        if len(self.labels) != len(self.components):
            raise DimensionError("One label per mixture component is required")

        weights = [w for w, _ in self.components]
        if any(w < 0 for w in weights):
            raise DimensionError("Mixture weights must be nonnegative")
        total = sum(weights)
        exact = all(isinstance(w, Fraction) for w in weights)
        ok = total == 1 if exact else abs(float(total) - 1) <= WEIGHT_TOLERANCE
        if not ok:
            raise DimensionError(f"Mixture weights sum to {total}, not 1")

        first = self.components[0][1]
        for _, walk in self.components:
            if (walk.start, walk.end) != (first.start, first.end):
                raise DimensionError("Mixture components must span the same steps")
        self.start, self.end, self.space = first.start, first.end, first.space

    @property
    def exact(self) -> bool:
        return all(walk.exact for _, walk in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def marginal(self, step: int) -> np.ndarray:
        return sum(w * walk.marginal(step) for w, walk in self.components)

    def component(self, label) -> MarkovWalk:
        return self.components[self.labels.index(label)][1]

    def conditional_divergence_to(self, reference: MarkovWalk) -> DivergenceValue:
        """D(Z | J || reference) = E_j D(Z | J=j || reference)."""
        total = zero(self.exact and reference.exact)
        for weight, walk in self.components:
            total = total + walk_divergence(walk, reference) * weight
        return total

    def __repr__(self) -> str:
        return f"WalkMixture({self.variable}, {len(self)} components, {self.start}..{self.end})"


def reversal_kernels(X: MarkovWalk, j: int, t: int) -> List[np.ndarray]:
    """Run X to step j, take one backward step, then resume X two steps behind."""
    kernels = []
    for s in range(-1, t + 3):
        if s < j:
            kernels.append(X.conditional(s, s + 1))
        elif s == j:
            kernels.append(X.conditional(j, j - 1))
        else:
            kernels.append(X.conditional(s - 2, s - 1))
    return kernels


def reversal_mixture(X: ConditionedWalk, t: Optional[int] = None) -> WalkMixture:
    """Z: J uniform on 1..t, Z | J=j spans steps -1..t+3."""
    t = X.t if t is None else t
    if t < 1:
        raise DimensionError(f"The reversal mixture needs t >= 1, got {t}")
    weight = Fraction(1, t) if X.exact else 1.0 / t
    components = []
    for j in range(1, t + 1):
        walk = MarkovWalk(
            X.space, -1, t + 3, X.initial, reversal_kernels(X, j, t), name=f"Z|J={j}"
        )
        components.append((weight, walk))
    LOG.debug(f"Built reversal mixture with {t} components")
    return WalkMixture(components, "J")


def mixture_marginal_residual(Z: WalkMixture, X: MarkovWalk) -> float:
    """Largest deviation of dist(Z_i | J=j) from X_i (i <= j) or X_{i-2} (i > j).

    Exact mixtures return 0.0 only on exact agreement.
    """
    worst = 0.0
    for label, (_, walk) in zip(Z.labels, Z.components):
        for i in walk.steps:
            expected = X.marginal(i if i <= label else i - 2)
            difference = walk.marginal(i) - expected
            if is_exact(difference):
                if any(d != 0 for d in difference):
                    worst = max(worst, float(np.max(np.abs(difference.astype(float)))) or 1e-300)
            else:
                worst = max(worst, float(np.max(np.abs(difference))))
    return worst
