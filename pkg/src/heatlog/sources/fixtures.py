"""Named fixture instances."""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, Iterator, Tuple

import numpy as np

from ..core.exceptions import SourceError
from ..heat.formats import Instance
from ..heat.generators import (
    complete_graph_kernel,
    hypercube_kernel,
    identity_kernel,
    path_chain,
    swap_kernel,
    unit_vector,
)
from ..heat.space import NonnegVector, SymmetricKernel
from .base import InstanceSource

LOG = logging.getLogger(__name__)

Triple = Tuple[SymmetricKernel, NonnegVector, NonnegVector]


def uniform_vector(size: int, exact: bool) -> NonnegVector:
    """The l2-unit constant vector; rational only when size is a perfect square."""
    root = math.isqrt(size)
    if exact and root * root == size:
        return NonnegVector(np.array([Fraction(1, root)] * size, dtype=object))
    return NonnegVector(np.full(size, 1.0 / math.sqrt(size)))


def _path(t: int):
    def build(exact: bool, epsilon) -> Triple:
        S = path_chain(t, epsilon, exact)
        return S, unit_vector(t + 1, 0, exact), unit_vector(t + 1, t, exact)

    return build


def _swap(exact: bool, epsilon) -> Triple:
    return swap_kernel(exact), unit_vector(2, 0, exact), unit_vector(2, 1, exact)


def _swap_uniform(exact: bool, epsilon) -> Triple:
    u = uniform_vector(2, exact)
    return swap_kernel(exact), u, u


def _identity(exact: bool, epsilon) -> Triple:
    u = uniform_vector(4, exact)
    return identity_kernel(4, exact), u, u


def _complete(exact: bool, epsilon) -> Triple:
    u = uniform_vector(4, exact)
    return complete_graph_kernel(4, exact), u, u


def _hypercube3(exact: bool, epsilon) -> Triple:
    origin = unit_vector(8, 0, exact)
    return hypercube_kernel(3, exact), origin, origin


FIXTURES: Dict[str, Callable[[bool, object], Triple]] = {
    "path2": _path(2),
    "path4": _path(4),
    "swap": _swap,
    "swap-uniform": _swap_uniform,
    "identity": _identity,
    "complete": _complete,
    "hypercube3": _hypercube3,
}


class FixtureSource(InstanceSource):
    """One named fixture; ``epsilon`` is the path weight and ignored elsewhere."""

    def __init__(self, name: str, exact: bool = True, epsilon=1):
        if name not in FIXTURES:
            raise SourceError(f"Unknown fixture '{name}'. Available: {sorted(FIXTURES)}")
        self.name = name
        self.exact = exact
        self.epsilon = Fraction(str(epsilon)) if exact else float(epsilon)

    def load(self) -> Instance:
        S, u, v = FIXTURES[self.name](self.exact, self.epsilon)
        descriptor = {"name": self.name, "fixture": self.name}
        if self.name.startswith("path"):
            descriptor["epsilon"] = str(self.epsilon)
        return Instance(S, u, v, descriptor)

    def get_instances(self) -> Iterator[Instance]:
        yield self.load()

    def get_name(self) -> str:
        return f"Fixture: {self.name}"


def list_fixtures():
    return sorted(FIXTURES)
