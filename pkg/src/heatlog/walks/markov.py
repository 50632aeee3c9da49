"""Time-inhomogeneous Markov walks on the augmented space Omega + {r, dump}."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.exceptions import DimensionError, KernelError
from ..divergence import UNDEFINED, DivergenceValue, conditional_divergence, kl
from ..heat.arith import ZERO_THRESHOLD, is_exact, support_mask
from ..heat.space import StateSpace

LOG = logging.getLogger(__name__)

ROW_TOLERANCE = 1e-9
WALK_GUARD = 2048


@dataclass(frozen=True)
class AugmentedSpace:
    """Omega with the origin r and an absorbing dump state appended.

    Indices 0..n-1 are Omega, ``r_index = n`` and ``dump_index = n + 1``.
    Residual and deficit mass is routed to the dump, never to r.
    """

    base: StateSpace

    @property
    def n(self) -> int:
        return self.base.size

    @property
    def r_index(self) -> int:
        return self.base.size

    @property
    def dump_index(self) -> int:
        return self.base.size + 1

    @property
    def size(self) -> int:
        return self.base.size + 2

    def label(self, index: int) -> str:
        if index == self.r_index:
            return "r"
        if index == self.dump_index:
            return "dump"
        return self.base.label(index)

    def point_mass(self, index: int, exact: bool) -> np.ndarray:
        mass = empty_vector(self.size, exact)
        mass[index] = one(exact)
        return mass


def one(exact: bool):
    return Fraction(1) if exact else 1.0


def empty_vector(size: int, exact: bool) -> np.ndarray:
    if exact:
        return np.array([Fraction(0)] * size, dtype=object)
    return np.zeros(size)


def empty_matrix(size: int, exact: bool) -> np.ndarray:
    if exact:
        return np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)
    return np.zeros((size, size))


def bayes_reverse(prior: np.ndarray, kernel: np.ndarray, posterior: np.ndarray) -> np.ndarray:
    """out[x, y] = prior[y] kernel[y, x] / posterior[x]; zero rows off the posterior support."""
    exact = is_exact(prior) or is_exact(kernel)
    size = len(prior)
    if exact:
        out = empty_matrix(size, True)
        for x in range(size):
            if posterior[x] == 0:
                continue
            for y in range(size):
                if prior[y] != 0 and kernel[y, x] != 0:
                    out[x, y] = prior[y] * kernel[y, x] / posterior[x]
        return out
    joint = (prior[:, None] * kernel).T
    out = np.zeros_like(joint)
    rows = posterior > 0
    out[rows] = joint[rows] / posterior[rows, None]
    return out


class MarkovWalk:
    """A walk with one initial law and one stochastic kernel per step.

    Forward walks start at step ``start`` and ``kernels[i]`` maps step
    ``start + i`` to ``start + i + 1``. Reversed walks are generated from step
    ``end`` downward and ``kernels[i]`` maps ``end - i`` to ``end - i - 1``.
    """

    def __init__(
        self,
        space: AugmentedSpace,
        start: int,
        end: int,
        initial: np.ndarray,
        kernels: Sequence[np.ndarray],
        reversed: bool = False,
        name: str = "",
    ):
        if end <= start:
            raise DimensionError(f"Walk must span at least one step, got {start}..{end}")
        if len(kernels) != end - start:
            raise DimensionError(f"Expected {end - start} kernels, got {len(kernels)}")
        if space.size > WALK_GUARD:
            raise DimensionError(f"Walks limited to {WALK_GUARD} states, got {space.size}")
        self.space = space
        self.start = start
        self.end = end
        self.initial = initial
        self.kernels = list(kernels)
        self.reversed = reversed
        self.name = name
        self.exact = is_exact(initial)
        self._marginals: Dict[int, np.ndarray] = {}
        self._conditionals: Dict[tuple, np.ndarray] = {}
        self._push_marginals()
        self._validate_rows()

    @property
    def steps(self) -> range:
        return range(self.start, self.end + 1)

    @property
    def origin(self) -> int:
        """The step the walk is generated from."""
        return self.end if self.reversed else self.start

    def _generative_pairs(self) -> List[tuple]:
        if self.reversed:
            return [(self.end - i, self.end - i - 1) for i in range(len(self.kernels))]
        return [(self.start + i, self.start + i + 1) for i in range(len(self.kernels))]

    def _push_marginals(self) -> None:
        current = self.initial
        self._marginals[self.origin] = current
        for kernel, (_, to) in zip(self.kernels, self._generative_pairs()):
            current = np.dot(current, kernel)
            self._marginals[to] = current

    def _validate_rows(self) -> None:
        for kernel, (frm, _) in zip(self.kernels, self._generative_pairs()):
            reachable = support_mask(self._marginals[frm], ZERO_THRESHOLD)
            for x in np.flatnonzero(reachable):
                total = kernel[x].sum()
                ok = total == 1 if self.exact else abs(total - 1) <= ROW_TOLERANCE
                if not ok:
                    label = self.space.label(x)
                    raise KernelError(f"{self!r}: row {label} at step {frm} sums to {total}")

    def marginal(self, step: int) -> np.ndarray:
        if step not in self._marginals:
            raise DimensionError(f"Step {step} outside {self.start}..{self.end}")
        return self._marginals[step]

    def generative_kernel(self, frm: int, to: int) -> Optional[np.ndarray]:
        for kernel, pair in zip(self.kernels, self._generative_pairs()):
            if pair == (frm, to):
                return kernel
        return None

    def conditional(self, frm: int, to: int) -> np.ndarray:
        """Rows of dist(W_to | W_frm = x) for adjacent steps, in either direction."""
        if abs(frm - to) != 1:
            raise DimensionError(f"Conditionals need adjacent steps, got {frm}->{to}")
        stored = self.generative_kernel(frm, to)
        if stored is not None:
            return stored
        key = (frm, to)
        if key not in self._conditionals:
            self._conditionals[key] = bayes_reverse(
                self.marginal(to), self.generative_kernel(to, frm), self.marginal(frm)
            )
        return self._conditionals[key]

    def endpoint_mass(self, step: int, index: int):
        return self.marginal(step)[index]

    def __repr__(self) -> str:
        direction = "reversed" if self.reversed else "forward"
        return f"MarkovWalk({self.name or 'walk'}, {self.start}..{self.end}, {direction})"


def conditional_step_divergence(P: MarkovWalk, Q: MarkovWalk, frm: int, to: int) -> DivergenceValue:
    """D(P_to | P_frm || Q_to | Q_frm)."""
    return conditional_divergence(P.marginal(frm), P.conditional(frm, to), Q.conditional(frm, to))


def walk_divergence(P: MarkovWalk, Q: MarkovWalk) -> DivergenceValue:
    """Trajectory divergence D(P || Q) by the chain rule from the first step."""
    if (P.start, P.end) != (Q.start, Q.end) or P.space.size != Q.space.size:
        raise DimensionError(f"Cannot compare {P!r} with {Q!r}")
    total = kl(P.marginal(P.start), Q.marginal(Q.start))
    for step in range(P.start, P.end):
        if total.is_undefined:
            return UNDEFINED
        total = total + conditional_step_divergence(P, Q, step, step + 1)
    return total
