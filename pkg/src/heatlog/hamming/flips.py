"""Flip distributions on the Boolean cube."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from ..core.exceptions import GuardError, ParameterError
from ..heat.generators import HYPERCUBE_GUARD
from .f2 import popcount

LOG = logging.getLogger(__name__)

PAIR = "pair"
WEIGHT = "weight"
VARIANTS = (PAIR, WEIGHT)
EXACT_FLIP_GUARD = 12


@dataclass(frozen=True, eq=False)
class FlipDistribution:
    """Law of k uniform-with-replacement coordinate flips started at 0.

    ``mass[x]`` is the probability of ending at x. The pair variant reads it
    as the law of the difference x - y under a uniform x, so pair masses are
    ``mass[x ^ y] / 2^n``.
    """

    n: int
    k: int
    variant: str
    mass: np.ndarray

    @property
    def exact(self) -> bool:
        return self.mass.dtype == object

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def total(self):
        return self.mass.sum()

    def _mass_where(self, predicate):
        return sum((self.mass[x] for x in range(self.size) if predicate(x)), 0 * self.mass[0])

    def weight_mass(self, weight: int):
        """Mass on points of Hamming weight ``weight``."""
        return self._mass_where(lambda x: popcount(x) == weight)

    def off_parity_mass(self):
        return self._mass_where(lambda x: popcount(x) % 2 != self.k % 2)

    def pair_mass(self, x: int, y: int):
        if self.variant != PAIR:
            raise ParameterError("Pair masses need the pair variant")
        return self.mass[x ^ y] / self.size

    def permuted(self, permutation: Sequence[int]) -> np.ndarray:
        """Masses with coordinate j relabelled to ``permutation[j]``."""
        result = np.zeros_like(self.mass)
        for x in range(self.size):
            image = sum(((x >> j) & 1) << permutation[j] for j in range(self.n))
            result[image] = self.mass[x]
        return result


def flip_step(mass: np.ndarray, n: int) -> np.ndarray:
    """One application of the single-flip stochastic map."""
    states = np.arange(len(mass))
    total = sum(mass[states ^ (1 << j)] for j in range(n))
    if mass.dtype == object:
        return total * Fraction(1, n)
    return total / n


def flip_distribution(n: int, k: int, variant: str = PAIR, exact: bool = False) -> FlipDistribution:
    if variant not in VARIANTS:
        raise ParameterError(f"Unknown flip variant {variant!r}")
    if not 1 <= n <= HYPERCUBE_GUARD:
        raise GuardError(f"Flip distributions need 1 <= n <= {HYPERCUBE_GUARD}, got {n}")
    if exact and n > EXACT_FLIP_GUARD:
        raise GuardError(f"Exact flip distributions limited to n <= {EXACT_FLIP_GUARD}")
    if k < 0:
        raise ParameterError(f"Flip count must be nonnegative, got {k}")
    size = 1 << n
    if exact:
        mass = np.array([Fraction(0)] * size, dtype=object)
        mass[0] = Fraction(1)
    else:
        mass = np.zeros(size)
        mass[0] = 1.0
    for _ in range(k):
        mass = flip_step(mass, n)
    LOG.debug(f"Flip distribution n={n}, k={k} ({variant})")
    return FlipDistribution(n, k, variant, mass)


def collision_bound(n: int, k: int) -> float:
    """1 - C(k,2)/n, a lower bound on the mass at weight k."""
    return 1 - comb(k, 2) / n
