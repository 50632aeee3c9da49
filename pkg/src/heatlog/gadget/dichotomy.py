"""The near-log-convexity dichotomy on one instance."""

import logging
import math

from ..core.exceptions import GadgetError, ParameterError
from ..core.reports import CheckReport, inequality_step, info_step, report_step, vacuous_step
from ..heat.space import NonnegVector, SymmetricKernel
from ..walks.conditioned import ConditionedWalk
from ..walks.lemmas import unit_log_moments
from ..walks.oracle import at_oracle_scale
from .bridges import bridge_diagnostic, bridges
from .budget import divergence_budget
from .construction import build_gadget_walks
from .cost import reference_walks, verify_gadget_cost
from .detectability import verify_detectability_bound
from .params import DEFAULT_EPSILON, delta_for, require_epsilon
from .steps import FirstBranch, good_steps

LOG = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
PIPELINE_MIN_STEPS = 8
PIPELINE_MAX_STATES = 512
CEILING_LOG_CAP = 60


def first_branch_margin(logs, t: int, epsilon: float) -> float:
    """log m_{t+2} - (1 - epsilon) log t - (1 + 2/t) log m_t."""
    return logs[t + 2] - (1 - epsilon) * math.log2(t) - (1 + 2 / t) * logs[t]


def second_branch_margin(logs, t: int, delta: float) -> float:
    """log m_{t+2} + log m_{t-2} - log delta - 2 log m_t; -inf when a moment vanishes."""
    if logs[t + 2] == -math.inf or logs[t - 2] == -math.inf:
        return -math.inf
    return logs[t + 2] + logs[t - 2] - math.log2(delta) - 2 * logs[t]


def ceiling_form_margin(logs, t: int, epsilon: float, delta: float) -> float:
    """m_{t+2} against m_t^{1+2/t} min(t^{1-eps}, ceil(delta m_t^{1-2/t} / m_{t-2})), in logs."""
    power = (1 - epsilon) * math.log2(t)
    if logs[t - 2] == -math.inf:
        factor = power
    else:
        ratio = math.log2(delta) + (1 - 2 / t) * logs[t] - logs[t - 2]
        if ratio <= 0:
            factor = min(power, 0.0)
        elif ratio > CEILING_LOG_CAP:
            factor = min(power, ratio)
        else:
            factor = min(power, math.log2(math.ceil(2**ratio)))
    return logs[t + 2] - (1 + 2 / t) * logs[t] - factor


def _pipeline(normalized, u, v, t, epsilon, tol, instance, report: CheckReport, margins):
    mu, nu = u.distribution(), v.distribution()
    X = ConditionedWalk(normalized, mu, nu, t)
    good = good_steps(X, t, epsilon)
    if isinstance(good, FirstBranch):
        report.extras["pipeline"] = good.to_dict()
        label = "pipeline branch 1 margin >= 0"
        report.add(inequality_step(label, margins[0], 0.0, tol, soft=True))
        return
    try:
        family = bridges(X, good)
        walks = build_gadget_walks(X, good, family)
    except GadgetError as e:
        LOG.warning(f"Gadget construction failed: {e}")
        report.extras["pipeline"] = {"branch": 2, "degenerate": str(e)}
        report.add(info_step("pipeline", note=f"not certified: {e}"))
        return

    budget = divergence_budget(walks, epsilon, tol, instance)
    references = reference_walks(walks)
    costs = [verify_gadget_cost(walks, k, tol, instance, references) for k in good.steps]
    diagnostic = bridge_diagnostic(X, family, tol, instance)
    parts = [budget, *costs, diagnostic]
    if at_oracle_scale(normalized.size, t):
        parts.append(verify_detectability_bound(X, tol, instance))
    for part in parts:
        report.add(report_step(part))
    report.extras["pipeline"] = {
        **good.to_dict(),
        **{part.check: part.to_dict() for part in parts},
    }
    report.add(inequality_step("pipeline branch 2 margin >= 0", margins[1], 0.0, tol, soft=True))


def main_dichotomy(
    S: SymmetricKernel,
    u: NonnegVector,
    v: NonnegVector,
    t: int,
    epsilon: float = DEFAULT_EPSILON,
    tol: float = DEFAULT_TOLERANCE,
    instance: str = "",
    pipeline: bool = True,
) -> CheckReport:
    """Which branch of m_{t+2} >= t^{1-eps} m_t^{1+2/t} or m_{t+2} m_{t-2} >= delta m_t^2 holds.

    Both margins come straight from the moment sequence of the normalized
    kernel against unit u, v. For t >= 8 on small spaces, and for every t on
    spaces small enough to enumerate, the gadget pipeline runs as well: its
    budget, per-step costs and bridge diagnostic each add one line that fails
    the report when they fail.
    """
    require_epsilon(epsilon)
    if t < 2:
        raise ParameterError(f"The dichotomy needs t >= 2, got {t}")
    delta = delta_for(epsilon)
    report = CheckReport("dichotomy", instance)
    normalized, logs = unit_log_moments(S, u, v, t + 2)
    if logs[t] == -math.inf:
        report.add(vacuous_step("m_t > 0", f"m_{t} = 0"))
        return report

    first = first_branch_margin(logs, t, epsilon)
    second = second_branch_margin(logs, t, delta)
    ceiling = ceiling_form_margin(logs, t, epsilon, delta)
    branch = 1 if first >= second else 2
    report.add(info_step("m_{t+2} >= t^{1-eps} m_t^{1+2/t} margin", first))
    report.add(info_step("m_{t+2} m_{t-2} >= delta m_t^2 margin", second))
    report.add(info_step("ceiling form margin", ceiling))
    report.add(inequality_step("max branch margin >= 0", max(first, second), 0.0, tol))
    report.extras.update(
        {
            "branch": branch,
            "epsilon": epsilon,
            "delta": delta,
            "t": t,
            "log_moments": {str(k): logs[k] for k in (t - 2, t, t + 2)},
        }
    )

    tiny = at_oracle_scale(S.size, t + 2)
    if pipeline and S.size <= PIPELINE_MAX_STATES and (t >= PIPELINE_MIN_STEPS or tiny):
        _pipeline(normalized, u, v, t, epsilon, tol, instance, report, (first, second))
    LOG.debug(f"Dichotomy on {instance or 'instance'}: branch {branch}, margins {first}, {second}")
    return report
