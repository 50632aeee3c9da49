"""The coset walk: <[Bx = c], mu_k> as a k-step walk that adds random columns of B."""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from ..core.exceptions import GuardError
from ..core.reports import CheckReport, identity_step, inequality_step, info_step, residual_step
from ..heat.generators import EXACT_GUARD, HYPERCUBE_GUARD, trial_generator
from ..heat.space import SymmetricKernel
from .f2 import columns, random_matrix
from .flips import WEIGHT, flip_distribution
from .vertices import AffineVertex, Hyperplane

LOG = logging.getLogger(__name__)

DIRECT_GUARD = 12
IDENTITY_TOLERANCE = 1e-12


def column_walk(rows: Sequence[int], n: int, exact: bool = False) -> SymmetricKernel:
    """S_B: from x, pick a column y of B uniformly and move to x + y."""
    m = len(rows)
    if m > HYPERCUBE_GUARD:
        raise GuardError(f"Coset walks limited to {HYPERCUBE_GUARD} rows")
    size = 1 << m
    cols = columns(rows, n)
    if exact:
        if size > EXACT_GUARD:
            raise GuardError(f"Exact coset walks limited to {EXACT_GUARD} states")
        dense = np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)
        for x in range(size):
            for y in cols:
                dense[x, x ^ y] += Fraction(1, n)
        return SymmetricKernel(dense)
    states = np.repeat(np.arange(size), n)
    targets = states ^ np.tile(np.array(cols, dtype=np.int64), size)
    data = np.full(states.shape, 1.0 / n)
    return SymmetricKernel(sp.csr_matrix((data, (states, targets)), shape=(size, size)))


def coset_walk_value(rows: Sequence[int], c: int, k: int, n: int, exact: bool = False):
    """<1_c, S_B^k 1_0>."""
    kernel = column_walk(rows, n, exact)
    if exact:
        current = np.array([Fraction(0)] * kernel.size, dtype=object)
        current[0] = Fraction(1)
    else:
        current = np.zeros(kernel.size)
        current[0] = 1.0
    for _ in range(k):
        current = kernel.apply(current)
    return current[c]


@lru_cache(maxsize=128)
def _weight_law(n: int, k: int, exact: bool):
    return flip_distribution(n, k, WEIGHT, exact)


def direct_value(rows: Sequence[int], c: int, k: int, n: int, exact: bool = False):
    """sum over x with Bx = c of mu_k(x), by enumerating the affine subspace."""
    if n > DIRECT_GUARD:
        raise GuardError(f"Direct affine sums limited to n <= {DIRECT_GUARD}")
    mass = _weight_law(n, k, exact).mass
    zero = Fraction(0) if exact else 0.0
    return sum((mass[x] for x in AffineVertex(n, rows, c).points), zero)


def coset_walk_identity(
    rows: Sequence[int],
    c: int,
    k: int,
    n: int,
    H: Optional[Hyperplane] = None,
    exact: bool = False,
    tol: float = IDENTITY_TOLERANCE,
) -> CheckReport:
    vertex = AffineVertex(n, rows, c)
    report = CheckReport("coset-walk", f"affine(n={n}, k={k})")
    walk = coset_walk_value(vertex.rows, c, k, n, exact)
    if n <= DIRECT_GUARD:
        direct = direct_value(vertex.rows, c, k, n, exact)
        report.add(identity_step("<1_c, S_B^k 1_0> = sum_{Bx=c} mu_k(x)", walk, direct, tol))
    else:
        report.add(info_step("<1_c, S_B^k 1_0>", walk, "direct sum skipped above the guard"))
    if H is not None:
        value = sum(coeff * coset_walk_value(vertex.rows, c, j, n) for coeff, j in H.components)
        report.add(
            inequality_step(
                "vertex bound > <V,H>",
                H.bound,
                value,
                0.0,
                soft=H.delta >= H.am_gm_threshold,
                data={"value": value},
            )
        )
    report.extras["vertex"] = vertex.to_dict()
    return report


def coset_identity_sweep(
    n: int, trials: int = 1000, seed: int = 0, k_max: int = 6, tol: float = IDENTITY_TOLERANCE
) -> CheckReport:
    """Largest |walk - direct| over random (B, c, k) drawn per trial from ``seed``."""
    report = CheckReport("coset-identity", f"random(n={n}, seed={seed})")
    worst, worst_trial = 0.0, None
    for trial in range(trials):
        rng = trial_generator(seed, trial)
        rows = random_matrix(rng, n)
        c = int(rng.integers(1 << n))
        k = int(rng.integers(0, k_max + 1))
        residual = abs(coset_walk_value(rows, c, k, n) - direct_value(rows, c, k, n))
        if residual > worst:
            worst = residual
            worst_trial = {"trial": trial, "k": k, **AffineVertex(n, rows, c).to_dict()}
    LOG.info(f"Coset identity over {trials} trials: max residual {worst}")
    report.add(info_step("trials", trials, k_max=k_max))
    report.add(residual_step("max |walk - direct|", worst, tol))
    report.extras["worst"] = worst_trial
    return report
