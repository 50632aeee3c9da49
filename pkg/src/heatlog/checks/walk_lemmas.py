"""Checker for the conditioned-walk identities."""

import logging
from typing import List, Optional, Sequence

from ..core.base import Checker
from ..core.exceptions import CheckerError
from ..core.reports import CheckReport
from ..heat.moments import normalize_substochastic
from ..walks.lemmas import (
    verify_conditioning_cost,
    verify_endpoint_entropy,
    verify_reversal_decomposition,
    verify_walk_oracle,
)
from ..walks.oracle import ORACLE_GUARD, ORACLE_STATES, ORACLE_STEPS

LOG = logging.getLogger(__name__)

LEMMAS = {
    "cost": verify_conditioning_cost,
    "decomposition": verify_reversal_decomposition,
    "entropy": verify_endpoint_entropy,
    "oracle": verify_walk_oracle,
}


class WalkLemmaChecker(Checker):
    """Conditioning cost, reversal decomposition, endpoint entropy and the trajectory oracle."""

    name = "walks"
    description = "Verifies the conditioned-walk identities at t = t_max"

    def __init__(
        self, lemmas: Optional[Sequence[str]] = None, oracle_guard: int = ORACLE_GUARD, **kwargs
    ) -> None:
        super().__init__(**kwargs)
        unknown = set(lemmas or ()) - set(LEMMAS)
        if unknown:
            raise CheckerError(f"Unknown lemma(s) {sorted(unknown)}. Available: {list(LEMMAS)}")
        self.lemmas = list(lemmas) if lemmas else list(LEMMAS)
        self.oracle_guard = oracle_guard

    def check(self, instance) -> List[CheckReport]:
        S = instance.kernel
        if not S.is_substochastic():
            S, _ = normalize_substochastic(S)
        mu, nu = instance.u.distribution(), instance.v.distribution()
        reports = []
        for lemma in self.lemmas:
            if lemma != "oracle":
                reports.append(LEMMAS[lemma](S, mu, nu, self.t_max, self.tol, instance.name))
            elif S.size > ORACLE_STATES:
                LOG.warning(f"Trajectory oracle skipped on {instance.name}: too many states")
            else:
                t = min(self.t_max, ORACLE_STEPS)
                reports.append(
                    verify_walk_oracle(S, mu, nu, t, self.tol, instance.name, self.oracle_guard)
                )
        return reports
