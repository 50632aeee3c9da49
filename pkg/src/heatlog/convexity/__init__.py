"""Moment inequality checks, counterexample search and the continuous-time probe."""

from .checks import (
    EqualityDiagnosis,
    TightnessProbe,
    blakley_dixon_report,
    check_blakley_dixon,
    check_erdos_simonovits,
    check_mandel_hughes,
    check_near_logconvexity,
    check_pate,
    check_scale_equivariance,
    equality_conditions,
    near_logconvexity_report,
    tightness_probe,
    tightness_report,
    violation_threshold,
)
from .continuous import ContinuousHeatProfile, continuous_probe, continuous_report, heat_action
from .search import SearchConfig, SearchSummary, counterexample_search, replay_trial

__all__ = [
    "EqualityDiagnosis",
    "TightnessProbe",
    "blakley_dixon_report",
    "check_blakley_dixon",
    "check_erdos_simonovits",
    "check_mandel_hughes",
    "check_near_logconvexity",
    "check_pate",
    "check_scale_equivariance",
    "equality_conditions",
    "near_logconvexity_report",
    "tightness_probe",
    "tightness_report",
    "violation_threshold",
    "ContinuousHeatProfile",
    "continuous_probe",
    "continuous_report",
    "heat_action",
    "SearchConfig",
    "SearchSummary",
    "counterexample_search",
    "replay_trial",
]
