"""Base-2 KL divergence, conditional divergence, mutual information, Renyi-2.

Conventions: 0 log(0/q) = 0; the divergence is undefined when the first
argument charges a point the reference measure does not. The reference may be
any nonnegative measure, not only a probability distribution.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.special import rel_entr

from .core.exceptions import DimensionError, SupportError
from .heat.arith import (
    ZERO_THRESHOLD,
    ExactLog,
    exact_sum,
    is_exact,
    log2_value,
    support_mask,
)
from .heat.space import check_same_space, mass_of

LOG = logging.getLogger(__name__)

EQUALITY_TOLERANCE = 1e-9
JOINT_TOLERANCE = 1e-9

Value = Union[float, ExactLog]


@dataclass(frozen=True)
class DivergenceValue:
    """A divergence in bits; ``value is None`` means undefined."""

    value: Optional[Value]

    @property
    def is_undefined(self) -> bool:
        return self.value is None

    @property
    def exact(self) -> bool:
        return isinstance(self.value, ExactLog)

    def _combine(self, other, op):
        if isinstance(other, DivergenceValue):
            if self.is_undefined or other.is_undefined:
                return UNDEFINED
            other = other.value
        if self.is_undefined:
            return UNDEFINED
        return DivergenceValue(op(self.value, other))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if self.is_undefined:
            return UNDEFINED
        return DivergenceValue(self.value * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if self.is_undefined:
            return UNDEFINED
        return DivergenceValue(self.value / scalar)

    def __neg__(self):
        if self.is_undefined:
            return UNDEFINED
        return DivergenceValue(-self.value)

    def __float__(self) -> float:
        if self.is_undefined:
            return math.nan
        return float(self.value)

    def close_to(self, other, tol: float = EQUALITY_TOLERANCE) -> bool:
        """Exact equality for exact pairs, absolute tolerance otherwise."""
        other_value = other.value if isinstance(other, DivergenceValue) else other
        if self.is_undefined or other_value is None:
            return False
        if isinstance(self.value, ExactLog) and isinstance(other_value, (ExactLog, int, Fraction)):
            return self.value == other_value
        return abs(float(self.value) - float(other_value)) <= tol

    def __repr__(self) -> str:
        if self.is_undefined:
            return "DivergenceValue(UNDEFINED)"
        return f"DivergenceValue({self.value})"


UNDEFINED = DivergenceValue(None)
DivergenceValue.UNDEFINED = UNDEFINED


def zero(exact: bool = False) -> DivergenceValue:
    return DivergenceValue(ExactLog() if exact else 0.0)


def kl(mu, nu, threshold: float = ZERO_THRESHOLD) -> DivergenceValue:
    """D(mu || nu) in bits."""
    p, q = mass_of(mu), mass_of(nu)
    check_same_space(p, q)
    exact = is_exact(p) and is_exact(q)
    if not exact and (is_exact(p) or is_exact(q)):
        p, q = p.astype(float), q.astype(float)

    support = support_mask(p, threshold)
    if exact:
        terms = []
        for x in np.flatnonzero(support):
            if q[x] == 0:
                return UNDEFINED
            terms.append(ExactLog.of(Fraction(p[x]) / Fraction(q[x])) * Fraction(p[x]))
        return DivergenceValue(exact_sum(terms, exact=True))

    ps, qs = p[support], q[support]
    if np.any(qs <= threshold):
        return UNDEFINED
    return DivergenceValue(float(np.sum(rel_entr(ps, qs)) / math.log(2)))


def kl_conditioned_bound(mu, nu, psi, tol: float = EQUALITY_TOLERANCE, threshold=ZERO_THRESHOLD):
    """D(mu||nu) >= -log nu(psi) for supp(mu) = psi; returns (value, equality)."""
    p, q = mass_of(mu), mass_of(nu)
    check_same_space(p, q)
    psi = sorted(int(x) for x in psi)
    support = [int(x) for x in np.flatnonzero(support_mask(p, threshold))]
    if support != psi:
        raise SupportError(f"Support {support} does not match the conditioning set {psi}")

    value = kl(p, q, threshold)
    if value.is_undefined:
        return value, False
    q_psi = sum((q[x] for x in psi), Fraction(0) if is_exact(q) else 0.0)
    bound = -ExactLog.of(q_psi) if isinstance(q_psi, Fraction) else -log2_value(q_psi)
    return value, value.close_to(DivergenceValue(bound), tol)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A joint law of (X1, X2) as a rows-by-cols mass matrix."""

    mass: np.ndarray

    def __post_init__(self):
        mass = self.mass
        if not isinstance(mass, np.ndarray):
            mass = np.asarray(mass)
            object.__setattr__(self, "mass", mass)
        if mass.ndim != 2:
            raise DimensionError(f"Joint mass must be two-dimensional, got {mass.shape}")
        total = mass.sum()
        ok = total == 1 if is_exact(mass) else abs(total - 1) <= JOINT_TOLERANCE
        if not ok:
            raise DimensionError(f"Joint mass sums to {total}, not 1")

    @property
    def exact(self) -> bool:
        return is_exact(self.mass)

    def first(self) -> np.ndarray:
        return self.mass.sum(axis=1)

    def second(self) -> np.ndarray:
        return self.mass.sum(axis=0)

    def transpose(self) -> "JointDistribution":
        return JointDistribution(self.mass.T.copy())

    def conditional_rows(self) -> np.ndarray:
        """Rows of dist(X2 | X1 = x1); zero rows where X1 has no mass."""
        marginal = self.first()
        rows = np.zeros_like(self.mass)
        for x in range(self.mass.shape[0]):
            if marginal[x] != 0:
                rows[x] = self.mass[x] / marginal[x]
        return rows


def conditional_divergence(marginal, kernel_p, kernel_q, threshold=ZERO_THRESHOLD):
    """sum_x marginal(x) D(kernel_p[x] || kernel_q[x]) over the support of marginal."""
    marginal = mass_of(marginal)
    exact = is_exact(marginal) and is_exact(kernel_p) and is_exact(kernel_q)
    total = zero(exact)
    for x in np.flatnonzero(support_mask(marginal, threshold)):
        term = kl(kernel_p[x], kernel_q[x], threshold)
        if term.is_undefined:
            return UNDEFINED
        total = total + term * marginal[x]
    return total


def conditional_kl(joint1: JointDistribution, joint2: JointDistribution) -> DivergenceValue:
    """D(X2 | X1 || Y2 | Y1) with the conditioning on the first coordinate."""
    if joint1.mass.shape != joint2.mass.shape:
        raise DimensionError("Joint distributions live on different spaces")
    return conditional_divergence(
        joint1.first(), joint1.conditional_rows(), joint2.conditional_rows()
    )


class ChainRuleCheck(NamedTuple):
    lhs: DivergenceValue
    rhs: DivergenceValue
    residual: Optional[float]


def kl_chain_rule_check(joint1: JointDistribution, joint2: JointDistribution) -> ChainRuleCheck:
    """D(X1X2 || Y1Y2) against D(X1 || Y1) + D(X2|X1 || Y2|Y1)."""
    if joint1.mass.shape != joint2.mass.shape:
        raise DimensionError("Joint distributions live on different spaces")
    lhs = kl(joint1.mass.ravel(), joint2.mass.ravel())
    rhs = kl(joint1.first(), joint2.first()) + conditional_kl(joint1, joint2)
    if lhs.is_undefined or rhs.is_undefined:
        return ChainRuleCheck(lhs, rhs, None)
    difference = lhs - rhs
    if difference.exact and difference.value.is_zero():
        return ChainRuleCheck(lhs, rhs, 0.0)
    return ChainRuleCheck(lhs, rhs, abs(float(difference)))


def mutual_information(joint: JointDistribution) -> DivergenceValue:
    """I(X;Y) = D(dist(X,Y) || dist(X) dist(Y))."""
    product = np.outer(joint.first(), joint.second())
    return kl(joint.mass.ravel(), product.ravel())


def shannon_entropy(mu, threshold: float = ZERO_THRESHOLD) -> DivergenceValue:
    p = mass_of(mu)
    if is_exact(p):
        terms = [-ExactLog.of(p[x]) * Fraction(p[x]) for x in np.flatnonzero(support_mask(p))]
        return DivergenceValue(exact_sum(terms, exact=True))
    support = p[p > threshold]
    return DivergenceValue(float(-np.sum(support * np.log2(support))))


def renyi2(mu) -> Value:
    """H2(mu) = -log2 sum mu(x)^2."""
    p = mass_of(mu)
    collision = (p * p).sum()
    if is_exact(p):
        return -ExactLog.of(collision)
    return -log2_value(float(collision))
