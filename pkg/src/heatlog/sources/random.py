"""Seeded random instance source."""

import logging
from typing import Iterator, Sequence

from ..core.exceptions import SourceError
from ..heat.formats import Instance
from ..heat.generators import random_instance
from .base import InstanceSource

LOG = logging.getLogger(__name__)


class RandomSource(InstanceSource):
    """Draws ``trials`` instances; trial i uses the Philox stream (seed, i)."""

    def __init__(
        self,
        sizes: Sequence[int] = (3, 4, 5, 6, 8),
        density: float = 0.5,
        trials: int = 100,
        seed: int = 0,
    ):
        if not sizes or any(size < 1 for size in sizes):
            raise SourceError(f"Sizes must be positive, got {list(sizes)}")
        if trials < 0:
            raise SourceError(f"Trial count must be nonnegative, got {trials}")
        self.sizes = tuple(sizes)
        self.density = density
        self.trials = trials
        self.seed = seed

    def instance(self, trial: int) -> Instance:
        size = self.sizes[trial % len(self.sizes)]
        S, u, v = random_instance(size, self.density, self.seed, trial)
        descriptor = {
            "name": f"random(seed={self.seed}, trial={trial})",
            "seed": self.seed,
            "trial": trial,
            "size": size,
            "density": self.density,
        }
        return Instance(S, u, v, descriptor)

    def get_instances(self) -> Iterator[Instance]:
        LOG.debug(f"Drawing {self.trials} random instances with seed {self.seed}")
        for trial in range(self.trials):
            yield self.instance(trial)

    def get_name(self) -> str:
        return f"Random: seed {self.seed}, {self.trials} trials"
