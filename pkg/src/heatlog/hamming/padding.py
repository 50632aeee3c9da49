"""Padding reduction from deciding ||a - b|| = k to a protocol on n + 2 bits."""

from dataclasses import dataclass
from typing import FrozenSet, Tuple

from ..core.exceptions import DimensionError
from .f2 import popcount, to_bits

PAD = 0b11


def protocol_answers(distance: int, k: int) -> FrozenSet[int]:
    """What an error-free protocol may answer: 1 on k-2 and k, 0 on k+2, anything elsewhere."""
    if distance in (k - 2, k):
        return frozenset({1})
    if distance == k + 2:
        return frozenset({0})
    return frozenset({0, 1})


@dataclass(frozen=True)
class PaddedInstances:
    """(00a, 00b) and (00a, 11b), the padding occupying coordinates n and n+1."""

    n: int
    k: int
    a: int
    b: int

    def __post_init__(self):
        if self.a >> self.n or self.b >> self.n:
            raise DimensionError(f"Inputs must be points of F_2^{self.n}")

    @property
    def distance(self) -> int:
        return popcount(self.a ^ self.b)

    @property
    def first(self) -> Tuple[int, int]:
        return self.a, self.b

    @property
    def second(self) -> Tuple[int, int]:
        return self.a, self.b | (PAD << self.n)

    @property
    def distances(self) -> Tuple[int, int]:
        return popcount(self.first[0] ^ self.first[1]), popcount(self.second[0] ^ self.second[1])

    @property
    def outcomes(self) -> FrozenSet[Tuple[int, int]]:
        """Every answer pair error-free runs of the protocol can produce."""
        near, far = self.distances
        return frozenset(
            (x, y) for x in protocol_answers(near, self.k) for y in protocol_answers(far, self.k)
        )

    @property
    def may_declare_k(self) -> bool:
        return (1, 0) in self.outcomes

    @property
    def must_declare_k(self) -> bool:
        return self.outcomes == {(1, 0)}

    def to_dict(self) -> dict:
        width = self.n + 2
        return {
            "n": self.n,
            "k": self.k,
            "distance": self.distance,
            "first": [to_bits(x, width) for x in self.first],
            "second": [to_bits(x, width) for x in self.second],
            "distances": list(self.distances),
            "outcomes": sorted(list(pair) for pair in self.outcomes),
            "declares_k": self.may_declare_k,
        }


def padding_reduction(a: int, b: int, n: int, k: int) -> PaddedInstances:
    return PaddedInstances(n, k, a, b)


def decision_table(k: int):
    """Answer sets on both padded instances for ||a - b|| in {k-2, k, k+2}."""
    return {
        distance: (protocol_answers(distance, k), protocol_answers(distance + 2, k))
        for distance in (k - 2, k, k + 2)
    }
