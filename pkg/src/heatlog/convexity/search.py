"""Randomized counterexample search over seeded instances."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from ..core.reports import json_number
from ..heat.formats import Instance
from ..heat.moments import MomentSequence, moment_sequence
from ..sources.random import RandomSource
from .checks import (
    DEFAULT_TOLERANCE,
    blakley_dixon_report,
    check_mandel_hughes,
    check_near_logconvexity,
    check_pate,
)

LOG = logging.getLogger(__name__)

THEOREMS = ("blakley-dixon", "near-log-convexity", "mandel-hughes", "pate", "log-convexity")
# log-convexity without truncation is expected to fail; it is tracked, not asserted
ASSERTED = THEOREMS[:4]


@dataclass(frozen=True)
class SearchConfig:
    sizes: Tuple[int, ...] = (3, 4, 5, 6, 8, 12)
    t_range: Tuple[int, int] = (2, 10)
    epsilon: float = 0.95
    delta: Optional[float] = None
    trials: int = 100
    seed: int = 0
    density: float = 0.5
    threads: int = 1
    tol: float = DEFAULT_TOLERANCE

    @property
    def t_max(self) -> int:
        return self.t_range[1] + 2

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "t_range": list(self.t_range),
            "epsilon": self.epsilon,
            "delta": self.delta,
            "trials": self.trials,
            "seed": self.seed,
            "density": self.density,
            "tol": self.tol,
        }


@dataclass(frozen=True)
class TrialResult:
    trial: int
    size: int
    slacks: Dict[str, Optional[float]]


@dataclass
class SearchSummary:
    config: SearchConfig
    minima: Dict[str, Tuple[Optional[float], Optional[int]]] = field(default_factory=dict)
    failures: Dict[str, int] = field(default_factory=dict)
    argmin: Dict[str, dict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.failures.get(name, 0) == 0 for name in ASSERTED)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "passed": self.passed,
            "theorems": {
                name: {
                    "min_slack": json_number(self.minima[name][0]),
                    "trial": self.minima[name][1],
                    "failures": self.failures[name],
                    "asserted": name in ASSERTED,
                    "argmin_instance": self.argmin.get(name),
                }
                for name in THEOREMS
            },
        }


def trial_instance(config: SearchConfig, trial: int) -> Instance:
    """The instance drawn for ``trial``; sizes cycle so that partitioning cannot reorder draws."""
    source = RandomSource(config.sizes, config.density, config.trials, config.seed)
    return source.instance(trial)


def log_convexity_slack(m: MomentSequence, t_lo: int, t_hi: int) -> Optional[float]:
    """min over t of log m_{t-2} + log m_{t+2} - 2 log m_t, skipping t with m_t = 0."""
    slacks = []
    for t in range(max(t_lo, 2), t_hi + 1):
        if m.log(t) == -math.inf:
            continue
        slacks.append(m.log(t - 2) + m.log(t + 2) - 2 * m.log(t))
    return min(slacks) if slacks else None


def _worst(steps) -> Optional[float]:
    slacks = [s.slack for s in steps if s.slack is not None]
    return min(slacks) if slacks else None


def evaluate_instance(instance: Instance, config: SearchConfig) -> Dict[str, Optional[float]]:
    t_lo, t_hi = config.t_range
    S, u, v = instance.kernel, instance.u, instance.v
    m = moment_sequence(S, u, v, config.t_max)
    diagonal = moment_sequence(S, u, u, config.t_max)
    return {
        "blakley-dixon": blakley_dixon_report(m, config.tol).worst_slack,
        "near-log-convexity": _worst(
            check_near_logconvexity(m, t, config.epsilon, config.delta, config.tol)
            for t in range(max(t_lo, 2), t_hi + 1)
        ),
        "mandel-hughes": _worst(
            check_mandel_hughes(diagonal, t, config.tol) for t in range(1, config.t_max + 1)
        ),
        "pate": _worst(
            check_pate(m, t, config.tol) for t in range(0, (config.t_max - 1) // 2 + 1)
        ),
        "log-convexity": log_convexity_slack(m, t_lo, t_hi),
    }


def replay_trial(config: SearchConfig, trial: int) -> TrialResult:
    instance = trial_instance(config, trial)
    return TrialResult(trial, instance.kernel.size, evaluate_instance(instance, config))


def counterexample_search(
    config: SearchConfig, on_trial: Optional[Callable[[TrialResult], None]] = None
) -> SearchSummary:
    """Sweep ``config.trials`` instances and keep the minimum slack per inequality.

    Ties on the slack are broken by the smaller trial number, so the summary
    does not depend on the thread count.
    """
    LOG.info(f"Searching {config.trials} trials, seed {config.seed}, {config.threads} threads")
    results: List[TrialResult] = []
    with ThreadPoolExecutor(max_workers=max(1, config.threads)) as pool:
        for result in pool.map(lambda trial: replay_trial(config, trial), range(config.trials)):
            results.append(result)
            if on_trial:
                on_trial(result)

    summary = SearchSummary(config)
    for name in THEOREMS:
        observed = [(r.slacks[name], r.trial) for r in results if r.slacks[name] is not None]
        summary.failures[name] = sum(1 for slack, _ in observed if slack < -config.tol)
        if not observed:
            summary.minima[name] = (None, None)
            continue
        slack, trial = min(observed)
        summary.minima[name] = (slack, trial)
        summary.argmin[name] = trial_instance(config, trial).to_dict()
        if name in ASSERTED and slack < -config.tol:
            LOG.warning(f"{name}: counterexample candidate at trial {trial}, slack {slack}")
    return summary
