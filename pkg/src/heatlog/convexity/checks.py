"""Moment inequality checkers, equality conditions and the path-family tightness probe.

All comparisons run in the base-2 log domain on a :class:`MomentSequence`;
vanishing moments map to -inf and are compared with total-order semantics.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.exceptions import ParameterError
from ..core.reports import (
    CheckReport,
    StepResult,
    identity_step,
    inequality_step,
    info_step,
    refused_step,
    vacuous_step,
)
from ..gadget.params import EPSILON_FLOOR, delta_for
from ..heat.formats import Instance
from ..heat.generators import path_chain, scale_kernel, unit_vector
from ..heat.moments import MomentSequence, moment_sequence, walk_count_density
from ..heat.space import NonnegVector, SymmetricKernel

LOG = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
SCALE_TOLERANCE = 1e-10
EQUALITY_TOLERANCE = 1e-9


def unit_vectors(instance: Instance):
    """u and v scaled to unit l2 norm; vectors already on the sphere keep their arithmetic."""
    return tuple(x if x.l2_squared == 1 else x.unit() for x in (instance.u, instance.v))


def instance_moments(instance: Instance, t_max: int) -> MomentSequence:
    u, v = unit_vectors(instance)
    return moment_sequence(instance.kernel, u, v, t_max, provenance=instance.name)


def check_blakley_dixon(
    m: MomentSequence, k: int, t: int, tol: float = DEFAULT_TOLERANCE
) -> StepResult:
    """t log m_k >= k log m_t for k >= t >= 1 of equal parity."""
    if not k >= t >= 1:
        raise ParameterError(f"Need k >= t >= 1, got k={k}, t={t}")
    label = f"m_{k}^{t} >= m_{t}^{k}"
    if (k - t) % 2:
        return refused_step(label, "k and t have different parity")
    lhs, rhs = t * m.log(k), k * m.log(t)
    note = ""
    if m.log(k) == -math.inf:
        note = "m_k = 0 forces m_t = 0"
    return inequality_step(label, lhs, rhs, tol, note, data={"k": k, "t": t})


def blakley_dixon_report(
    m: MomentSequence, tol: float = DEFAULT_TOLERANCE, instance: str = ""
) -> CheckReport:
    """Every same-parity pair k > t >= 1 within the sequence."""
    report = CheckReport("blakley-dixon", instance)
    for t in range(1, m.t_max + 1):
        for k in range(t + 2, m.t_max + 1, 2):
            report.add(check_blakley_dixon(m, k, t, tol))
    return report


def resolve_delta(epsilon: float, delta: Optional[float]):
    """(delta, note): the derived constant for epsilon > 7/8, else the caller's, labelled."""
    if epsilon > EPSILON_FLOOR:
        return (delta_for(epsilon) if delta is None else delta), ""
    if delta is None:
        raise ParameterError(f"No derived delta for epsilon = {epsilon} <= 7/8; supply one")
    return delta, "extrapolated"


def check_near_logconvexity(
    m: MomentSequence,
    t: int,
    epsilon: float,
    delta: Optional[float] = None,
    tol: float = DEFAULT_TOLERANCE,
) -> StepResult:
    """m_{t+2} / m_t^{1+2/t} >= min(t^{1-eps}, delta m_t^{1-2/t} / m_{t-2}) in logs.

    A vanishing m_{t-2} makes the second branch infinite.
    """
    if t < 2:
        raise ParameterError(f"Near log-convexity needs t >= 2, got {t}")
    delta, note = resolve_delta(epsilon, delta)
    label = f"near log-convexity at t={t}"
    if m.log(t) == -math.inf:
        return vacuous_step(label, f"m_{t} = 0")
    lhs = m.log(t + 2) - (1 + 2 / t) * m.log(t)
    first = (1 - epsilon) * math.log2(t)
    if m.log(t - 2) == -math.inf:
        second = math.inf
    else:
        second = math.log2(delta) + (1 - 2 / t) * m.log(t) - m.log(t - 2)
    data = {"t": t, "first_branch": first, "second_branch": second, "delta": delta}
    return inequality_step(label, lhs, min(first, second), tol, note, data=data)


def near_logconvexity_report(
    m: MomentSequence,
    epsilon: float,
    delta: Optional[float] = None,
    tol: float = DEFAULT_TOLERANCE,
    instance: str = "",
) -> CheckReport:
    report = CheckReport("near-log-convexity", instance)
    for t in range(2, m.t_max - 1):
        report.add(check_near_logconvexity(m, t, epsilon, delta, tol))
    return report


def check_mandel_hughes(m: MomentSequence, t: int, tol: float = DEFAULT_TOLERANCE) -> StepResult:
    """<u, S^t u> >= <u, S u>^t; ``m`` must come from u = v."""
    return inequality_step(f"m_{t} >= m_1^{t}", m.log(t), t * m.log(1), tol, data={"t": t})


def check_pate(m: MomentSequence, t: int, tol: float = DEFAULT_TOLERANCE) -> StepResult:
    """<v, S^{2t+1} u> >= <v, S u>^{2t+1}."""
    power = 2 * t + 1
    return inequality_step(
        f"m_{power} >= m_1^{power}", m.log(power), power * m.log(1), tol, data={"t": t}
    )


def check_erdos_simonovits(
    G: SymmetricKernel, k: int, t: int, tol: float = DEFAULT_TOLERANCE
) -> StepResult:
    """w_k(G)^t >= w_t(G)^k for a 0/1 graph and same-parity k >= t >= 1."""
    if not k >= t >= 1:
        raise ParameterError(f"Need k >= t >= 1, got k={k}, t={t}")
    label = f"w_{k}^{t} >= w_{t}^{k}"
    if (k - t) % 2:
        return refused_step(label, "k and t have different parity")
    w_k, w_t = walk_count_density(G, k), walk_count_density(G, t)
    lhs = t * math.log2(w_k) if w_k > 0 else -math.inf
    rhs = k * math.log2(w_t) if w_t > 0 else -math.inf
    return inequality_step(label, lhs, rhs, tol, data={"w_k": w_k, "w_t": w_t})


def scale_slack(S: SymmetricKernel, u: NonnegVector, v: NonnegVector, t: int) -> float:
    m = moment_sequence(S, u, v, t + 2)
    return m.log(t + 2) - (1 + 2 / t) * m.log(t)


def check_scale_equivariance(
    S: SymmetricKernel,
    u: NonnegVector,
    v: NonnegVector,
    t: int,
    c: float,
    tol: float = SCALE_TOLERANCE,
) -> StepResult:
    """log m_{t+2} - (1+2/t) log m_t is unchanged by S -> cS."""
    base = scale_slack(S, u, v, t)
    scaled = scale_slack(scale_kernel(S, c), u, v, t)
    return identity_step(f"slack invariant under S -> {c}S at t={t}", scaled, base, tol)


@dataclass(frozen=True)
class EqualityDiagnosis:
    """Which equality condition for m_{t+2}^t = m_t^{t+2} holds, next to what is observed."""

    t: int
    odd_condition: bool
    even_condition: bool
    degenerate: bool
    observed_equality: bool
    eigenvalue: Optional[float]

    @property
    def predicted_equality(self) -> bool:
        condition = self.odd_condition if self.t % 2 else self.even_condition
        return condition or self.degenerate

    @property
    def consistent(self) -> bool:
        return self.predicted_equality == self.observed_equality

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "odd_condition": self.odd_condition,
            "even_condition": self.even_condition,
            "degenerate": self.degenerate,
            "observed_equality": self.observed_equality,
            "predicted_equality": self.predicted_equality,
            "consistent": self.consistent,
            "eigenvalue": self.eigenvalue,
        }


def _proportional(a: np.ndarray, b: np.ndarray, tol: float):
    """(holds, lam) for a = lam b with lam >= 0, in the least-squares sense."""
    norm = float(b.dot(b))
    if norm == 0:
        return bool(np.linalg.norm(a) <= tol), None
    lam = float(a.dot(b)) / norm
    residual = np.linalg.norm(a - lam * b)
    return bool(lam >= -tol and residual <= tol * max(1.0, np.linalg.norm(a))), lam


def equality_conditions(
    S: SymmetricKernel, u: NonnegVector, v: NonnegVector, t: int, tol: float = EQUALITY_TOLERANCE
) -> EqualityDiagnosis:
    """Odd t: Su = lam v and Sv = lam u. Even t: u = v is an eigenvector of S^2."""
    kernel = S.to_float()
    x, y = u.unit().values, v.unit().values
    su, sv = kernel.apply(x), kernel.apply(y)
    first, lam = _proportional(su, y, tol)
    second, lam_back = _proportional(sv, x, tol)
    odd = first and second and lam is not None and lam_back is not None
    odd = odd and abs(lam - lam_back) <= tol * max(1.0, abs(lam))

    same = bool(np.linalg.norm(x - y) <= tol)
    even, eigenvalue = _proportional(kernel.apply(su), x, tol)
    even = same and even

    m = moment_sequence(S, u, v, t + 2)
    degenerate = m.log(t + 2) == -math.inf
    lhs, rhs = t * m.log(t + 2), (t + 2) * m.log(t)
    if degenerate:
        observed = lhs == rhs
    else:
        observed = abs(lhs - rhs) <= tol * max(1.0, abs(lhs))
    diagnosis = EqualityDiagnosis(
        t, odd, even, degenerate, observed, lam if t % 2 else eigenvalue
    )
    LOG.debug(f"Equality diagnosis at t={t}: {diagnosis}")
    return diagnosis


@dataclass(frozen=True)
class TightnessProbe:
    """The strengthened bound with (1+eta)/2 and t^{1-2/t} on the path family.

    Evaluated at s = t+2 with m_t, m_{t+2}, m_{t+4} of the path on t+1 states
    between its endpoints; ``margin > 0`` means the strengthened bound fails.
    """

    t: int
    eta: float
    lhs: float
    first_branch: float
    second_branch: float
    margin: float
    threshold: float
    walk_count: int

    @property
    def violated(self) -> bool:
        return self.margin > 0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "eta": self.eta,
            "lhs": self.lhs,
            "first_branch": self.first_branch,
            "second_branch": self.second_branch,
            "margin": self.margin,
            "violated": self.violated,
            "threshold": self.threshold,
            "walk_count": self.walk_count,
        }


def violation_threshold(t: int) -> float:
    """eta above which the strengthened bound fails on the path with t+1 states."""
    return (3 * t - 2) / t**2


def tightness_probe(t: int, eta: float) -> TightnessProbe:
    if t < 2:
        raise ParameterError(f"Tightness probe needs t >= 2, got {t}")
    if eta < 0:
        raise ParameterError(f"eta must be nonnegative, got {eta}")
    S = path_chain(t, 1, exact=True)
    u, v = unit_vector(t + 1, 0, exact=True), unit_vector(t + 1, t, exact=True)
    m = moment_sequence(S, u, v, t + 4)
    s = t + 2
    lhs = m.log(s + 2) - (1 + 2 / s) * m.log(s)
    first = (1 - 2 / s) * math.log2(s)
    second = math.log2((1 + eta) / 2) + (1 - 2 / s) * m.log(s) - m.log(s - 2)
    probe = TightnessProbe(
        t, eta, lhs, first, second, min(first, second) - lhs, violation_threshold(t), int(m[s + 2])
    )
    LOG.debug(f"Tightness probe t={t}, eta={eta}: margin {probe.margin}")
    return probe


def tightness_report(t: int, eta: float, instance: str = "") -> CheckReport:
    """The probe as a report; the closed-form walk count is checked exactly."""
    probe = tightness_probe(t, eta)
    report = CheckReport("tightness", instance or f"path(t={t})")
    closed_form = (t * t + 3 * t - 2) // 2
    report.add(identity_step("m_{t+4} = (t^2 + 3t - 2)/2", probe.walk_count, closed_form, 0))
    report.add(
        info_step(
            "strengthened bound margin",
            probe.margin,
            "violated" if probe.violated else "not violated",
            threshold=probe.threshold,
        )
    )
    report.extras.update(probe.to_dict())
    return report
