"""Checker for near log-convexity of heat moments."""

from typing import List

from ..convexity.checks import (
    check_scale_equivariance,
    instance_moments,
    near_logconvexity_report,
    unit_vectors,
)
from ..core.base import Checker
from ..core.reports import CheckReport

SCALES = (0.1, 10.0)


class NearLogConvexityChecker(Checker):
    """m_{t+2} / m_t^{1+2/t} >= min(t^{1-eps}, delta m_t^{1-2/t} / m_{t-2}) for 2 <= t <= t_max."""

    name = "nlc"
    description = "Verifies near log-convexity and its scale invariance"

    def check(self, instance) -> List[CheckReport]:
        m = instance_moments(instance, self.t_max + 2)
        report = near_logconvexity_report(m, self.epsilon, self.delta, self.tol, instance.name)

        scale = CheckReport("scale-equivariance", instance.name)
        u, v = unit_vectors(instance)
        for t in range(2, self.t_max + 1):
            for c in SCALES:
                scale.add(check_scale_equivariance(instance.kernel, u, v, t, c))
        return [report, scale]
