"""Float and exact-rational arithmetic shared by every heatlog module.

Float mode uses plain numpy float64 arrays. Exact mode uses numpy object
arrays holding ``fractions.Fraction`` values; logarithms of rationals are then
represented symbolically by :class:`ExactLog` so identities between
divergences can be checked with zero tolerance.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Dict, Iterable, Union

import numpy as np
from sympy import factorint

LOG = logging.getLogger(__name__)

ZERO_THRESHOLD = 1e-15

Number = Union[float, int, Fraction]


@lru_cache(maxsize=4096)
def _factor(value: int) -> Dict[int, int]:
    return {int(p): int(e) for p, e in factorint(value).items()}


@total_ordering
class ExactLog:
    """A rational combination of base-2 logarithms of primes.

    ``ExactLog({2: 1, 3: Fraction(-1, 2)})`` stands for log2(2) - log2(3)/2.
    Logarithms of distinct primes are linearly independent over the rationals,
    so the exponent map is a canonical form and equality is exact.
    """

    __slots__ = ("_exponents",)

    def __init__(self, exponents: Dict[int, Fraction] = None):
        cleaned = {}
        for prime, exponent in (exponents or {}).items():
            exponent = Fraction(exponent)
            if exponent != 0:
                cleaned[int(prime)] = exponent
        self._exponents = cleaned

    @classmethod
    def of(cls, value: Number) -> "ExactLog":
        """Exact log2 of a positive rational."""
        value = Fraction(value)
        if value <= 0:
            raise ValueError(f"log of non-positive rational {value}")
        exponents: Dict[int, Fraction] = {}
        for prime, e in _factor(value.numerator).items():
            exponents[prime] = exponents.get(prime, Fraction(0)) + e
        for prime, e in _factor(value.denominator).items():
            exponents[prime] = exponents.get(prime, Fraction(0)) - e
        return cls(exponents)

    @classmethod
    def rational(cls, value: Number) -> "ExactLog":
        """A rational number of bits, i.e. value * log2(2)."""
        return cls({2: Fraction(value)})

    @property
    def exponents(self) -> Dict[int, Fraction]:
        return dict(self._exponents)

    def is_zero(self) -> bool:
        return not self._exponents

    def _coerce(self, other) -> "ExactLog":
        if isinstance(other, ExactLog):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactLog.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return float(self) + other
        merged = dict(self._exponents)
        for prime, e in other._exponents.items():
            merged[prime] = merged.get(prime, Fraction(0)) + e
        return ExactLog(merged)

    __radd__ = __add__

    def __neg__(self):
        return ExactLog({p: -e for p, e in self._exponents.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return float(self) - other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return ExactLog({p: e * scalar for p, e in self._exponents.items()})
        return float(self) * scalar

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return self * (Fraction(1) / Fraction(scalar))
        return float(self) / scalar

    def __float__(self) -> float:
        return float(sum(float(e) * math.log2(p) for p, e in self._exponents.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactLog.rational(other)
        if isinstance(other, ExactLog):
            return self._exponents == other._exponents
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        if self == other:
            return False
        return float(self) < float(other)

    def __hash__(self) -> int:
        return hash(frozenset(self._exponents.items()))

    def __repr__(self) -> str:
        terms = " + ".join(f"{e}*log2({p})" for p, e in sorted(self._exponents.items()))
        return f"ExactLog({terms or '0'})"


def is_exact(values) -> bool:
    """True for Fraction scalars and object arrays."""
    if isinstance(values, np.ndarray):
        return values.dtype == object
    return isinstance(values, Fraction)


def as_array(values, exact: bool = False) -> np.ndarray:
    """Coerce a sequence to a float64 array or a Fraction object array."""
    if isinstance(values, np.ndarray) and not exact:
        if values.dtype == object:
            return values.astype(float)
        return values.astype(float, copy=False)
    if exact:
        flat = [Fraction(x) for x in np.asarray(values, dtype=object).ravel()]
        return np.array(flat, dtype=object).reshape(np.shape(values))
    return np.asarray(values, dtype=float)


def to_float_array(values: np.ndarray) -> np.ndarray:
    return np.asarray(values, dtype=float) if values.dtype != object else values.astype(float)


def support_mask(values: np.ndarray, threshold: float = ZERO_THRESHOLD) -> np.ndarray:
    """Boolean mask of entries treated as nonzero."""
    if is_exact(values):
        return np.array([x != 0 for x in values.ravel()], dtype=bool).reshape(values.shape)
    return values > threshold


def is_zero(value: Number, threshold: float = ZERO_THRESHOLD) -> bool:
    if isinstance(value, (Fraction, int)):
        return value == 0
    return abs(value) <= threshold


def log2_fraction(value: Fraction) -> float:
    """Float log2 of a rational without overflowing on huge numerators."""
    return math.log2(value.numerator) - math.log2(value.denominator)


def log2_value(value: Number) -> float:
    """Base-2 log as a float; -inf for exact zeros."""
    if isinstance(value, Fraction):
        return -math.inf if value == 0 else log2_fraction(value)
    if value <= 0:
        return -math.inf
    return math.log2(value)


def exact_log2(value: Number):
    """ExactLog for rationals, float log2 otherwise."""
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        if value == 0:
            return -math.inf
        return ExactLog.of(value)
    return log2_value(value)


def exact_sum(terms: Iterable, exact: bool):
    """Sum ExactLog or float terms with the right additive identity."""
    total = ExactLog() if exact else 0.0
    for term in terms:
        total = total + term
    return total


def scalar(value: Number, exact: bool):
    """Promote an int/float constant to the arithmetic of the current mode."""
    return Fraction(value) if exact else float(value)
