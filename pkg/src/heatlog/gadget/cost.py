"""Divergence cost of one gadget component against the reference walks."""

import logging

from ..core.reports import CheckReport, identity_step, inequality_step, info_step
from ..divergence import kl
from ..heat.arith import exact_log2
from ..walks.markov import walk_divergence
from ..walks.reference import forward_walk, return_mass
from .bridges import expected_bridge_costs
from .construction import GadgetWalks

LOG = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


def reference_walks(walks: GadgetWalks):
    """(F^{t+2}, F^{t-2}) for the instance the conditioned walk was built on."""
    X = walks.X
    return (
        forward_walk(X.source, X.mu, X.nu, X.t + 2),
        forward_walk(X.source, X.mu, X.nu, X.t - 2),
    )


def component_costs(walks: GadgetWalks, k: int, references=None):
    """(D(W|K=k || F^{t+2}), D(Y|K=k || F^{t-2}))."""
    long_reference, short_reference = references or reference_walks(walks)
    return (
        walk_divergence(walks.component_w(k), long_reference),
        walk_divergence(walks.component_y(k), short_reference),
    )


def verify_gadget_cost(
    walks: GadgetWalks, k: int, tol: float = DEFAULT_TOLERANCE, instance: str = "", references=None
) -> CheckReport:
    """Check the per-component cost bound and its exact decomposition for good step ``k``.

    D(W|K=k || F^{t+2}) + D(Y|K=k || F^{t-2}) equals
    2 D(X'_k || X_k) - 2 log S^t(mu, nu) + E D(pi||mu) + E D(pi||nu)
    and is at most the same expression with 2 in place of 2 D(X'_k || X_k).
    """
    X = walks.X
    report = CheckReport(f"gadget-cost[k={k}]", instance)
    long_reference, short_reference = references or reference_walks(walks)
    to_w, to_y = component_costs(walks, k, (long_reference, short_reference))
    lhs = to_w + to_y

    heat_log = exact_log2(X.heat)
    shift = kl(walks.good.conditioned[k], X.marginal(k))
    to_mu, to_nu = expected_bridge_costs(X, walks.family, k)
    exact_rhs = shift * 2 - heat_log * 2 + to_mu + to_nu
    bound = to_mu + to_nu - heat_log * 2 + 2

    report.add(info_step("D(W|K=k||F^{t+2})", to_w))
    report.add(info_step("D(Y|K=k||F^{t-2})", to_y))
    decomposition = "cost = 2D(X'_k||X_k) - 2log S^t + E D(pi||mu) + E D(pi||nu)"
    report.add(identity_step(decomposition, lhs, exact_rhs, tol))
    report.add(inequality_step("cost bound >= cost", bound, lhs, tol))

    check_cost = walk_divergence(walks.checks[k], X)
    report.add(identity_step("D(Xcheck^k||X) = D(X'_k||X_k)", check_cost, shift, tol))
    report.add(inequality_step("D(X'_k||X_k) <= 1", 1, shift, tol))

    long_return = exact_log2(return_mass(long_reference, X.t + 3))
    short_return = exact_log2(return_mass(short_reference, X.t - 1))
    report.add(inequality_step("D(W|K=k||F^{t+2}) >= -log S^{t+2}", to_w, -long_return, tol))
    report.add(inequality_step("D(Y|K=k||F^{t-2}) >= -log S^{t-2}", to_y, -short_return, tol))
    LOG.debug(f"Gadget cost at k={k}: {float(lhs)}")
    return report
