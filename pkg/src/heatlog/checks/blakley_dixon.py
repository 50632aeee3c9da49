"""Checker for the two-vector moment monotonicity m_k^t >= m_t^k."""

from typing import List

from ..convexity.checks import (
    blakley_dixon_report,
    check_mandel_hughes,
    check_pate,
    equality_conditions,
    instance_moments,
    unit_vectors,
)
from ..core.base import Checker
from ..core.reports import CheckReport, flagged_step, info_step
from ..walks.lemmas import bd_proof_chain
from ..walks.markov import WALK_GUARD


PROOF_CHAIN_STEPS = 4


class BlakleyDixonChecker(Checker):
    """Same-parity monotonicity, its one-vector and odd-power cases, and the proof chain."""

    name = "bd"
    description = "Verifies m_k^t >= m_t^k with equality diagnosis and the walk proof chain"

    def check(self, instance) -> List[CheckReport]:
        m = instance_moments(instance, self.t_max)
        reports = [blakley_dixon_report(m, self.tol, instance.name)]

        special = CheckReport("special-cases", instance.name)
        for t in range(0, (self.t_max - 1) // 2 + 1):
            special.add(check_pate(m, t, self.tol))
        if instance.u is instance.v:
            for t in range(1, self.t_max + 1):
                special.add(check_mandel_hughes(m, t, self.tol))
        reports.append(special)

        u, v = unit_vectors(instance)
        equality = CheckReport("equality-conditions", instance.name)
        for t in range(1, self.t_max - 1):
            diagnosis = equality_conditions(instance.kernel, u, v, t)
            equality.add(info_step(f"equality at t={t}", None, **diagnosis.to_dict()))
            if not diagnosis.consistent:
                equality.add(
                    flagged_step(
                        f"equality prediction at t={t}",
                        "conditions disagree with the observed moments",
                        predicted=diagnosis.predicted_equality,
                        observed=diagnosis.observed_equality,
                    )
                )
        reports.append(equality)

        if instance.kernel.size + 2 <= WALK_GUARD:
            for t in range(1, min(self.t_max, PROOF_CHAIN_STEPS) + 1):
                reports.append(bd_proof_chain(instance.kernel, u, v, t, self.tol, instance.name))
        return reports
