"""Checker for the near-log-convexity dichotomy and its gadget pipeline."""

from typing import List

from ..core.base import Checker
from ..core.reports import CheckReport
from ..gadget.dichotomy import main_dichotomy


class GadgetDichotomyChecker(Checker):
    """Which branch holds for 2 <= t <= t_max; the pipeline runs at t_max only."""

    name = "gadget"
    description = "Verifies the dichotomy and certifies the second branch through the gadget"

    def check(self, instance) -> List[CheckReport]:
        S, u, v = instance.kernel, instance.u, instance.v
        return [
            main_dichotomy(
                S, u, v, t, self.epsilon, self.tol, instance.name, pipeline=t == self.t_max
            )
            for t in range(2, self.t_max + 1)
        ]
