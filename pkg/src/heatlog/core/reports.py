"""Verification report records shared by every checker."""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

LOG = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
REFUSED = "refused"
VACUOUS = "vacuous"
UNDEFINED = "undefined"
FLAGGED = "flagged"
INFO = "info"

FAILING = (FAIL, UNDEFINED)


def json_number(value: Any) -> Any:
    """JSON-ready scalar: floats stay floats, infinities become strings."""
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        value = float(value)
    if not isinstance(value, float):
        if hasattr(value, "value"):
            return json_number(value.value)
        value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _to_float(value: Any) -> Optional[float]:
    if value is None:
        return None
    if hasattr(value, "value") and not isinstance(value, (int, float, Fraction)):
        value = value.value
        if value is None:
            return None
    return float(value)


def _difference(lhs: float, rhs: float) -> float:
    if lhs == rhs:
        return 0.0
    return lhs - rhs


@dataclass(frozen=True)
class StepResult:
    """One verified line: lhs, rhs and the signed slack of the claim."""

    label: str
    lhs: Optional[float]
    rhs: Optional[float]
    slack: Optional[float]
    verdict: str
    note: str = ""
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict not in FAILING

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "label": self.label,
            "lhs": json_number(self.lhs),
            "rhs": json_number(self.rhs),
            "slack": json_number(self.slack),
            "verdict": self.verdict,
        }
        if self.note:
            result["note"] = self.note
        if self.data:
            result["data"] = {k: _json_value(v) for k, v in self.data.items()}
        return result


def _json_value(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, str):
        return value
    return json_number(value)


def identity_step(label: str, lhs: Any, rhs: Any, tol: float, note: str = "") -> StepResult:
    """A claimed equality; exact operands must agree exactly."""
    if _to_float(lhs) is None or _to_float(rhs) is None:
        return StepResult(label, _to_float(lhs), _to_float(rhs), None, UNDEFINED, note)
    lhs_value = getattr(lhs, "value", lhs)
    rhs_value = getattr(rhs, "value", rhs)
    exact = _is_exact_number(lhs_value) and _is_exact_number(rhs_value)
    if exact:
        residual = float(lhs_value - rhs_value) if lhs_value != rhs_value else 0.0
        verdict = PASS if lhs_value == rhs_value else FAIL
    else:
        residual = _difference(_to_float(lhs), _to_float(rhs))
        verdict = PASS if abs(residual) <= tol else FAIL
    data = {"residual": residual, "exact": exact}
    LOG.debug(f"{label}: residual {residual} ({verdict})")
    return StepResult(label, _to_float(lhs), _to_float(rhs), -abs(residual), verdict, note, data)


def inequality_step(
    label: str,
    lhs: Any,
    rhs: Any,
    tol: float,
    note: str = "",
    soft: bool = False,
    data: Optional[Dict[str, Any]] = None,
) -> StepResult:
    """A claimed inequality lhs >= rhs; ``soft`` claims are flagged, not failed."""
    lhs_f, rhs_f = _to_float(lhs), _to_float(rhs)
    if lhs_f is None or rhs_f is None:
        return StepResult(label, lhs_f, rhs_f, None, UNDEFINED, note, dict(data or {}))
    slack = _difference(lhs_f, rhs_f)
    if slack >= -tol:
        verdict = PASS
    else:
        verdict = FLAGGED if soft else FAIL
        LOG.warning(f"{label}: slack {slack} below tolerance")
    return StepResult(label, lhs_f, rhs_f, slack, verdict, note, dict(data or {}))


def info_step(label: str, value: Any = None, note: str = "", **data: Any) -> StepResult:
    return StepResult(label, _to_float(value), None, None, INFO, note, dict(data))


def residual_step(label: str, residual: float, tol: float, note: str = "") -> StepResult:
    """A measured deviation that must stay within tol."""
    verdict = PASS if residual <= tol else FAIL
    if verdict == FAIL:
        LOG.warning(f"{label}: residual {residual} exceeds {tol}")
    return StepResult(label, residual, tol, tol - residual, verdict, note)


def vacuous_step(label: str, note: str = "") -> StepResult:
    LOG.warning(f"{label}: vacuous ({note})")
    return StepResult(label, None, None, None, VACUOUS, note)


def refused_step(label: str, note: str = "") -> StepResult:
    return StepResult(label, None, None, None, REFUSED, note)


def flagged_step(label: str, note: str = "", **data: Any) -> StepResult:
    """A soft claim seen not to hold; reported without failing the check."""
    LOG.warning(f"{label}: flagged ({note})")
    return StepResult(label, None, None, None, FLAGGED, note, dict(data))


def _is_exact_number(value: Any) -> bool:
    from ..heat.arith import ExactLog

    return isinstance(value, (ExactLog, Fraction, int)) and not isinstance(value, bool)


@dataclass
class CheckReport:
    """All verified lines of one check on one instance."""

    check: str
    instance: str
    steps: List[StepResult] = field(default_factory=list)
    verdict_override: Optional[str] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def add(self, step: StepResult) -> StepResult:
        self.steps.append(step)
        return step

    def extend(self, steps) -> None:
        self.steps.extend(steps)

    @property
    def worst_slack(self) -> Optional[float]:
        slacks = [s.slack for s in self.steps if s.slack is not None and s.verdict != INFO]
        return min(slacks) if slacks else None

    @property
    def verdict(self) -> str:
        if self.verdict_override:
            return self.verdict_override
        if any(s.verdict in FAILING for s in self.steps):
            return FAIL
        for token in (VACUOUS, REFUSED):
            if self.steps and all(s.verdict == token for s in self.steps):
                return token
        return PASS

    @property
    def passed(self) -> bool:
        return self.verdict not in FAILING

    def step(self, label: str) -> StepResult:
        for s in self.steps:
            if s.label == label:
                return s
        raise KeyError(label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "instance": self.instance,
            "verdict": self.verdict,
            "worst_slack": json_number(self.worst_slack),
            "steps": [s.to_dict() for s in self.steps],
            "extras": {k: _json_value(v) for k, v in self.extras.items()},
        }


def report_step(report: CheckReport, label: Optional[str] = None, note: str = "") -> StepResult:
    """One line standing for a whole sub-report: failing, flagged or passing with it."""
    label = label or f"{report.check} passes"
    if not report.passed:
        verdict = FAIL
    elif report.verdict in (VACUOUS, REFUSED):
        verdict = report.verdict
    elif any(s.verdict == FLAGGED for s in report.steps):
        verdict = FLAGGED
    else:
        verdict = PASS
    if verdict == FAIL:
        failed = [s.label for s in report.steps if s.verdict in FAILING]
        LOG.warning(f"{label}: failed at {failed}")
    data = {"steps": len(report.steps)}
    return StepResult(label, None, None, report.worst_slack, verdict, note, data)
