"""Bridge laws pi: the backward law of a good step conditioned on forward-heavy states."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.reports import CheckReport, inequality_step, info_step
from ..divergence import kl, zero
from ..heat.arith import ZERO_THRESHOLD, is_exact, support_mask
from ..walks.conditioned import ConditionedWalk
from .detectability import backward_forward_rows, step_weight
from .steps import GoodSteps

LOG = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Bridge:
    """pi = mu | psi for one good step ``k`` and state ``x``; ``pi`` is None on a null set."""

    step: int
    state: int
    psi: Tuple[int, ...]
    mass: object
    pi: Optional[np.ndarray]
    flagged: bool

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "state": self.state,
            "psi": list(self.psi),
            "mass": float(self.mass),
            "flagged": self.flagged,
        }


@dataclass
class BridgeFamily:
    good: GoodSteps
    bridges: Dict[Tuple[int, int], Bridge]

    @property
    def flagged(self) -> List[Bridge]:
        return [b for b in self.bridges.values() if b.flagged]

    @property
    def degenerate(self) -> List[Bridge]:
        return [b for b in self.bridges.values() if b.pi is None]

    def for_step(self, k: int) -> List[Bridge]:
        return [b for (step, _), b in sorted(self.bridges.items()) if step == k]

    def mass_table(self) -> List[dict]:
        return [b.to_dict() for _, b in sorted(self.bridges.items())]


def forward_heavy_set(mu_row: np.ndarray, nu_row: np.ndarray, weight) -> Tuple[int, ...]:
    """{y : nu(y) >= weight / (1 - weight) mu(y)}, restricted to the support of mu."""
    ratio = weight / (1 - weight)
    return tuple(
        int(y)
        for y in np.flatnonzero(support_mask(mu_row, ZERO_THRESHOLD))
        if nu_row[y] >= ratio * mu_row[y]
    )


def make_bridge(k: int, x: int, mu_row: np.ndarray, nu_row: np.ndarray, weight, gamma) -> Bridge:
    psi = forward_heavy_set(mu_row, nu_row, weight)
    mass = sum((mu_row[y] for y in psi), 0 * mu_row[0])
    if not mass > 0:
        LOG.warning(f"Bridge at step {k}, state {x} conditions on a null set")
        return Bridge(k, x, psi, mass, None, True)
    pi = mu_row * 0
    for y in psi:
        pi[y] = mu_row[y] / mass
    flagged = float(mass) < gamma - MASS_TOLERANCE
    if flagged:
        LOG.warning(f"Bridge mass {float(mass):.6g} below gamma {gamma} at step {k}, state {x}")
    return Bridge(k, x, psi, mass, pi, flagged)


def bridges(X: ConditionedWalk, good: GoodSteps) -> BridgeFamily:
    """Materialize psi, pi and the mass table for every good step and state of X'_k."""
    family = {}
    for k in good.steps:
        weight = step_weight(good.t, k, X.exact)
        mu, nu = backward_forward_rows(X, k)
        law = good.conditioned[k]
        for x in np.flatnonzero(support_mask(law, ZERO_THRESHOLD)):
            family[(k, int(x))] = make_bridge(k, int(x), mu[x], nu[x], weight, good.gamma)
    result = BridgeFamily(good, family)
    LOG.debug(f"Built {len(family)} bridges, {len(result.flagged)} flagged")
    return result


def bridge_minimizer(mu_row: np.ndarray, nu_row: np.ndarray) -> Tuple[np.ndarray, float]:
    """argmin_p D(p||mu) + D(p||nu) = sqrt(mu nu) / <sqrt mu, sqrt nu>, with its value."""
    mu = np.asarray(mu_row, dtype=float)
    nu = np.asarray(nu_row, dtype=float)
    root = np.sqrt(mu * nu)
    overlap = float(root.sum())
    if overlap <= 0:
        return np.zeros_like(root), math.inf
    return root / overlap, -2 * math.log2(overlap)


def bridge_diagnostic(
    X: ConditionedWalk, family: BridgeFamily, tol: float = 1e-9, instance: str = ""
) -> CheckReport:
    """Compare each bridge's cost D(pi||mu) + D(pi||nu) with the unconstrained minimum."""
    report = CheckReport("bridge-diagnostic", instance)
    gaps = []
    for (k, x), bridge in sorted(family.bridges.items()):
        if bridge.pi is None:
            continue
        mu, nu = backward_forward_rows(X, k)
        _, minimum = bridge_minimizer(mu[x], nu[x])
        cost = float(kl(bridge.pi, mu[x]) + kl(bridge.pi, nu[x]))
        gaps.append(cost - minimum)
        report.add(inequality_step(f"bridge cost >= minimum at k={k}, x={x}", cost, minimum, tol))
    if gaps:
        report.add(info_step("mean excess over the minimizer", float(np.mean(gaps))))
    return report


def expected_bridge_costs(X: ConditionedWalk, family: BridgeFamily, k: int):
    """(E_{x~X'_k} D(pi||mu), E_{x~X'_k} D(pi||nu)) as divergence values."""
    mu, nu = backward_forward_rows(X, k)
    law = family.good.conditioned[k]
    to_mu = to_nu = zero(is_exact(law))
    for bridge in family.for_step(k):
        x = bridge.state
        to_mu = to_mu + kl(bridge.pi, mu[x]) * law[x]
        to_nu = to_nu + kl(bridge.pi, nu[x]) * law[x]
    return to_mu, to_nu
