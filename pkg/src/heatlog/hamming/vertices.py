"""Separating hyperplanes and the polytope vertices they are evaluated on."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import DimensionError, GuardError, ParameterError
from ..gadget.params import DEFAULT_EPSILON, default_alphas
from ..heat.generators import hypercube_kernel
from .f2 import affine_points, apply, check_shape, to_bits
from .flips import PAIR, WEIGHT, FlipDistribution, flip_distribution

LOG = logging.getLogger(__name__)

K_LOG_DELTA = "k-log-delta"
K_LOG_K = "k-log-k"
PDT = "pdt"
KINDS = (K_LOG_DELTA, K_LOG_K, PDT)
PAIR_ENUMERATION_GUARD = 3


@dataclass(frozen=True)
class Hyperplane:
    """H as a signed combination sum_j coefficient_j mu_{k_j}."""

    kind: str
    k: int
    delta: float
    alpha1: float
    alpha2: float
    components: Tuple[Tuple[float, int], ...]

    @property
    def bound(self) -> float:
        """The value every vertex stays strictly below."""
        if self.kind == K_LOG_DELTA:
            return (3 * self.delta) ** (self.k / 2)
        return (6 * self.delta / self.k**self.alpha1) ** (self.k / 2)

    @property
    def am_gm_threshold(self) -> float:
        """delta below which the second branch alone forces a negative value."""
        return 2 * self.alpha2**0.5 / 6

    @property
    def flip_counts(self) -> Tuple[int, ...]:
        return tuple(k for _, k in self.components)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "delta": self.delta,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "components": [[c, k] for c, k in self.components],
            "bound": self.bound,
        }


def hyperplane(
    kind: str,
    k: int,
    delta: float,
    alpha1: Optional[float] = None,
    alpha2: Optional[float] = None,
    epsilon: float = DEFAULT_EPSILON,
) -> Hyperplane:
    """mu_k - mu_{k+2}/(3 delta) for k-log-delta, else mu_k - (mu_{k-2} + mu_{k+2})/(6 delta).

    alpha1 and alpha2 default to (1 - epsilon, delta(epsilon)).
    """
    if kind not in KINDS:
        raise ParameterError(f"Unknown hyperplane kind {kind!r}; use one of {', '.join(KINDS)}")
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    default1, default2 = default_alphas(epsilon)
    alpha1 = default1 if alpha1 is None else alpha1
    alpha2 = default2 if alpha2 is None else alpha2
    if kind == K_LOG_DELTA:
        if k < 1:
            raise ParameterError(f"k must be at least 1, got {k}")
        components = ((1.0, k), (-1 / (3 * delta), k + 2))
    else:
        if k < 2:
            raise ParameterError(f"k must be at least 2 for {kind}, got {k}")
        components = ((1.0, k), (-1 / (6 * delta), k - 2), (-1 / (6 * delta), k + 2))
    return Hyperplane(kind, k, delta, alpha1, alpha2, components)


@dataclass(frozen=True)
class RankOneVertex:
    """u v^T for the characteristic vectors of two subsets of F_2^n."""

    n: int
    u_set: FrozenSet[int] = field(default_factory=frozenset)
    v_set: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        size = 1 << self.n
        object.__setattr__(self, "u_set", frozenset(self.u_set))
        object.__setattr__(self, "v_set", frozenset(self.v_set))
        if any(not 0 <= x < size for x in self.u_set | self.v_set):
            raise DimensionError(f"Vertex points must lie in F_2^{self.n}")

    @classmethod
    def full(cls, n: int) -> "RankOneVertex":
        points = frozenset(range(1 << n))
        return cls(n, points, points)

    @classmethod
    def from_masks(cls, n: int, u_mask: int, v_mask: int) -> "RankOneVertex":
        """Subsets given as bitmasks over the 2^n points."""
        size = 1 << n
        return cls(
            n,
            frozenset(x for x in range(size) if (u_mask >> x) & 1),
            frozenset(y for y in range(size) if (v_mask >> y) & 1),
        )

    def vectors(self, exact: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        size = 1 << self.n
        if exact:
            u = np.array([Fraction(int(x in self.u_set)) for x in range(size)], dtype=object)
            v = np.array([Fraction(int(y in self.v_set)) for y in range(size)], dtype=object)
            return u, v
        u = np.array([float(x in self.u_set) for x in range(size)])
        v = np.array([float(y in self.v_set) for y in range(size)])
        return u, v

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": [to_bits(x, self.n) for x in sorted(self.u_set)],
            "v": [to_bits(y, self.n) for y in sorted(self.v_set)],
        }


@dataclass(frozen=True)
class AffineVertex:
    """The indicator x -> [Bx = c] of a parity decision tree leaf."""

    n: int
    rows: Tuple[int, ...]
    c: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        check_shape(self.rows, self.c, self.n)

    @property
    def points(self):
        return affine_points(self.rows, self.c, self.n)

    def contains(self, x: int) -> bool:
        return apply(self.rows, x) == self.c

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "B": [to_bits(row, self.n) for row in self.rows],
            "c": to_bits(self.c, len(self.rows)),
        }


@lru_cache(maxsize=64)
def _cube(n: int, exact: bool):
    return hypercube_kernel(n, exact)


def walk_moment(R: RankOneVertex, k: int, exact: bool = False):
    """<R, mu_k> = <v, W^k u> / 2^n with W the normalized cube adjacency."""
    kernel = _cube(R.n, exact)
    u, v = R.vectors(exact)
    current = u
    for _ in range(k):
        current = kernel.apply(current)
    value = v.dot(current)
    return value * Fraction(1, 1 << R.n) if exact else float(value) / (1 << R.n)


def rank_one_value(R: RankOneVertex, D: Union[FlipDistribution, Hyperplane], exact: bool = False):
    """<R, D> through k walk steps on the cube; pairs are never enumerated."""
    if isinstance(D, Hyperplane):
        return sum(c * walk_moment(R, k, exact) for c, k in D.components)
    if D.variant != PAIR:
        raise ParameterError("Rank-one vertices pair with the pair variant of mu_k")
    if D.n != R.n:
        raise DimensionError(f"Vertex on n={R.n} against a distribution on n={D.n}")
    return walk_moment(R, D.k, exact or D.exact)


def pair_enumeration_value(R: RankOneVertex, D: Union[FlipDistribution, Hyperplane]):
    """<R, D> by summing the pair law over U x V; exact, for n <= 3 only."""
    if R.n > PAIR_ENUMERATION_GUARD:
        raise GuardError(f"Pair enumeration limited to n <= {PAIR_ENUMERATION_GUARD}")
    if isinstance(D, Hyperplane):
        return sum(
            c * pair_enumeration_value(R, flip_distribution(R.n, k, PAIR, exact=True))
            for c, k in D.components
        )
    return sum(
        (D.pair_mass(x, y) for x in R.u_set for y in R.v_set),
        Fraction(0) if D.exact else 0.0,
    )


def affine_value(V: AffineVertex, D: Union[FlipDistribution, Hyperplane], exact: bool = False):
    """<V, D> = sum of the weight-variant mass over the points with Bx = c."""
    if isinstance(D, Hyperplane):
        return sum(
            c * affine_value(V, flip_distribution(V.n, k, WEIGHT, exact), exact)
            for c, k in D.components
        )
    if D.n != V.n:
        raise DimensionError(f"Vertex on n={V.n} against a distribution on n={D.n}")
    return sum((D.mass[x] for x in V.points), Fraction(0) if D.exact else 0.0)
