"""Continuous-time heat profile f(x) = <v, e^{x(S-I)} u> and its near-log-convexity residual.

An exploration tool: the residual x^2 (log f)'' - 2 log f is estimated by
finite differences, so a negative value is a lead, not a counterexample.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from ..core.exceptions import KernelError, ParameterError
from ..core.reports import CheckReport, inequality_step, info_step
from ..heat.space import NonnegVector, SymmetricKernel

LOG = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-6
UNDERFLOW = 1e-300
STEP_FRACTION = 1e-3
MIN_STEP = 1e-4


@dataclass(frozen=True)
class ContinuousHeatProfile:
    """f, log2 f and the residual on ``grid``; excluded points carry NaN."""

    grid: np.ndarray
    f: np.ndarray
    log_f: np.ndarray
    second_derivative: np.ndarray
    residual: np.ndarray
    excluded: List[float]
    step: float

    @property
    def min_residual(self) -> Optional[float]:
        finite = self.residual[np.isfinite(self.residual)]
        return float(finite.min()) if finite.size else None

    def to_rows(self) -> List[dict]:
        def cell(value):
            return float(value) if np.isfinite(value) else None

        return [
            {"t": float(x), "f": float(f), "logf": cell(lf), "residual": cell(r)}
            for x, f, lf, r in zip(self.grid, self.f, self.log_f, self.residual)
        ]


def heat_action(S: SymmetricKernel, u: NonnegVector, v: NonnegVector, x: float) -> float:
    """<v, e^{x(S-I)} u> through the action of the exponential on u."""
    kernel = S.to_float()
    generator = kernel.matrix - sp.identity(kernel.size, format="csr")
    values = expm_multiply(x * generator, u.unit().values.astype(float))
    return float(np.dot(v.unit().values.astype(float), values))


def default_step(grid: np.ndarray) -> float:
    spacing = float(np.min(np.diff(grid))) if grid.size > 1 else float(grid[0])
    return max(STEP_FRACTION * spacing, MIN_STEP)


def _second_difference(g, x: float, h: float) -> float:
    return (g(x + h) - 2 * g(x) + g(x - h)) / h**2


def continuous_probe(
    S: SymmetricKernel,
    u: NonnegVector,
    v: NonnegVector,
    grid: Sequence[float],
    h: Optional[float] = None,
) -> ContinuousHeatProfile:
    """Evaluate f on ``grid`` and x^2 (log f)'' - 2 log f with Richardson-refined differences.

    Points where f, or f at a stencil point, falls below 1e-300 are excluded.
    """
    grid = np.asarray(sorted(float(x) for x in grid))
    if grid.size == 0 or grid[0] <= 0:
        raise ParameterError("The grid must be a nonempty set of positive times")
    if not S.is_substochastic():
        raise KernelError("Continuous probe needs a substochastic kernel")
    h = default_step(grid) if h is None else float(h)
    if h <= 0:
        raise ParameterError(f"Finite-difference step must be positive, got {h}")

    cache = {}

    def log_f(x: float) -> float:
        if x not in cache:
            value = heat_action(S, u, v, x)
            cache[x] = np.log2(value) if value >= UNDERFLOW else np.nan
        return cache[x]

    f = np.array([heat_action(S, u, v, x) for x in grid])
    logs = np.full(grid.size, np.nan)
    second = np.full(grid.size, np.nan)
    residual = np.full(grid.size, np.nan)
    excluded = []
    for index, x in enumerate(grid):
        step = min(h, x / 2)
        coarse = _second_difference(log_f, x, step)
        fine = _second_difference(log_f, x, step / 2)
        if f[index] < UNDERFLOW or not np.isfinite(coarse) or not np.isfinite(fine):
            excluded.append(float(x))
            LOG.warning(f"Heat profile underflows near x={x}; point excluded")
            continue
        logs[index] = np.log2(f[index])
        second[index] = (4 * fine - coarse) / 3
        residual[index] = x**2 * second[index] - 2 * logs[index]
        LOG.debug(f"x={x}: log f={logs[index]}, residual={residual[index]}")
    return ContinuousHeatProfile(grid, f, logs, second, residual, excluded, h)


def continuous_report(
    profile: ContinuousHeatProfile, tol: float = RESIDUAL_TOLERANCE, instance: str = ""
) -> CheckReport:
    """Residuals as soft steps: a negative one is flagged, never failed."""
    report = CheckReport("continuous", instance)
    for x, value in zip(profile.grid, profile.residual):
        if np.isfinite(value):
            report.add(inequality_step(f"residual at x={x:g}", float(value), 0.0, tol, soft=True))
    if profile.excluded:
        report.add(info_step("excluded points", len(profile.excluded), points=profile.excluded))
    report.extras.update({"step": profile.step, "min_residual": profile.min_residual})
    return report
