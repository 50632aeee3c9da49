"""Corruption certificates: the largest <R, H> over polytope vertices and what it implies."""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..core.exceptions import GuardError, ParameterError, ZeroHeatError
from ..core.reports import CheckReport, identity_step, inequality_step, info_step, vacuous_step
from ..gadget.dichotomy import main_dichotomy
from ..gadget.params import DEFAULT_EPSILON, default_alphas
from ..heat.arith import ZERO_THRESHOLD
from ..heat.generators import hypercube_kernel, trial_generator
from ..heat.space import NonnegVector
from .f2 import apply, random_matrix
from .flips import WEIGHT, flip_distribution
from .vertices import (
    K_LOG_DELTA,
    PDT,
    AffineVertex,
    Hyperplane,
    RankOneVertex,
    hyperplane,
    walk_moment,
)

LOG = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
RANDOM = "random"
EXHAUSTIVE_GUARD = 3
RANDOM_GUARD = 14
CERTIFICATE_TOLERANCE = 1e-12
BATCH = 256


@dataclass(frozen=True)
class BranchAudit:
    """Per-vertex dichotomy counts over the searched vertices with <R, mu_k> > 0."""

    vertices: int
    zero_moment: int
    first_branch: int
    second_branch: int
    neither: int
    sign_failures: int

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "zero_moment": self.zero_moment,
            "first_branch": self.first_branch,
            "second_branch": self.second_branch,
            "neither": self.neither,
            "sign_failures": self.sign_failures,
        }


@dataclass(frozen=True)
class CorruptionCertificate:
    hyperplane: Hyperplane
    n: int
    max_vertex_value: float
    argmax: dict
    search_mode: str
    seed: Optional[int]
    violations: int
    audit: BranchAudit

    @property
    def bound(self) -> float:
        return self.hyperplane.bound

    @property
    def implied_bits_lower_bound(self) -> float:
        """log(bound^{-1} / 3)."""
        return implied_bits(self.bound)

    @property
    def guaranteed(self) -> bool:
        """Whether every vertex is known to stay below the bound for these parameters."""
        H = self.hyperplane
        return H.kind == K_LOG_DELTA or H.delta < H.am_gm_threshold

    def to_dict(self) -> dict:
        H = self.hyperplane
        return {
            "kind": H.kind,
            "n": self.n,
            "k": H.k,
            "delta": H.delta,
            "alpha1": H.alpha1,
            "alpha2": H.alpha2,
            "max_vertex_value": self.max_vertex_value,
            "bound": self.bound,
            "implied_bits_lower_bound": self.implied_bits_lower_bound,
            "search_mode": self.search_mode,
            "seed": self.seed,
            "violations": self.violations,
            "guaranteed": self.guaranteed,
            "argmax": self.argmax,
            "branch_audit": self.audit.to_dict(),
        }


def implied_bits(bound: float) -> float:
    return math.log2(1 / (3 * bound))


def branch_audit(H: Hyperplane, moments: Dict[int, np.ndarray], tol: float) -> BranchAudit:
    """Classify every vertex by the branch of the dichotomy its moments satisfy.

    A sign failure is a vertex whose branch forces <R, H> <= 0 but whose value
    is positive: the first branch forces it once <R, mu_k> reaches the bound,
    the second through AM-GM once delta < 2 sqrt(alpha2) / 6.
    """
    k = H.k
    mk, upper = moments[k], moments[k + 2]
    values = sum(c * moments[j] for c, j in H.components)
    positive = mk > ZERO_THRESHOLD
    power = np.where(positive, mk, 0.0) ** (1 + 2 / k)
    if H.kind == K_LOG_DELTA:
        first = upper >= power - tol
        second = np.zeros_like(first)
        forced = first & (mk >= H.bound)
    else:
        first = upper >= k**H.alpha1 * power - tol
        second = moments[k - 2] * upper >= H.alpha2 * mk**2 - tol
        forced = (first & (mk >= H.bound)) | (second & (H.delta < H.am_gm_threshold))
    failures = positive & forced & (values > tol)
    return BranchAudit(
        int(mk.size),
        int((~positive).sum()),
        int((positive & first).sum()),
        int((positive & second).sum()),
        int((positive & ~first & ~second).sum()),
        int(failures.sum()),
    )


def _subset_indicators(size: int) -> np.ndarray:
    masks = np.arange(1 << size)
    return ((masks[:, None] >> np.arange(size)) & 1).astype(float)


def _exhaustive_rank_one(n: int, flips):
    """Moments over all (U, V); row index u_mask * 2^{2^n} + v_mask."""
    size = 1 << n
    dense = hypercube_kernel(n).dense()
    indicators = _subset_indicators(size)
    moments = {}
    for k in flips:
        walk = np.linalg.matrix_power(dense, k) / size
        moments[k] = (indicators @ walk @ indicators.T).ravel()
    count = 1 << size

    def describe(index: int) -> dict:
        return RankOneVertex.from_masks(n, index // count, index % count).to_dict()

    return moments, describe


def _random_rank_one(n: int, flips, trials: int, seed: int):
    size = 1 << n
    kernel = hypercube_kernel(n)
    draws = []
    for trial in range(trials):
        rng = trial_generator(seed, trial)
        draws.append((rng.random(size) < 0.5, rng.random(size) < 0.5))
    moments = {k: np.zeros(trials) for k in flips}
    for start in range(0, trials, BATCH):
        chunk = draws[start : start + BATCH]
        current = np.array([u for u, _ in chunk], dtype=float).T
        targets = np.array([v for _, v in chunk], dtype=float).T
        for step in range(max(flips) + 1):
            if step in moments:
                moments[step][start : start + len(chunk)] = (targets * current).sum(axis=0) / size
            current = kernel.matrix @ current

    def describe(index: int) -> dict:
        u, v = draws[index]
        vertex = RankOneVertex(n, np.flatnonzero(u).tolist(), np.flatnonzero(v).tolist())
        return {**vertex.to_dict(), "trial": index}

    return moments, describe


def _affine_moments(n: int, flips, matrices):
    """Moments over every c for each matrix; row index matrix_index * 2^n + c."""
    size = 1 << n
    masses = {k: flip_distribution(n, k, WEIGHT).mass for k in flips}
    blocks = {k: [] for k in flips}
    for rows in matrices:
        images = np.array([apply(rows, x) for x in range(size)])
        for k in flips:
            blocks[k].append(np.bincount(images, weights=masses[k], minlength=size))
    return {k: np.concatenate(blocks[k]) for k in flips}


def _exhaustive_affine(n: int, flips):
    size = 1 << n
    matrices = list(itertools.product(range(size), repeat=n))
    moments = _affine_moments(n, flips, matrices)

    def describe(index: int) -> dict:
        return AffineVertex(n, matrices[index // size], index % size).to_dict()

    return moments, describe


def _random_affine(n: int, flips, trials: int, seed: int):
    size = 1 << n
    draws = []
    for trial in range(trials):
        rng = trial_generator(seed, trial)
        draws.append((random_matrix(rng, n), int(rng.integers(size))))
    every_c = _affine_moments(n, flips, [rows for rows, _ in draws])
    picked = np.array([index * size + c for index, (_, c) in enumerate(draws)], dtype=np.int64)
    moments = {k: values[picked] for k, values in every_c.items()}

    def describe(index: int) -> dict:
        rows, c = draws[index]
        return {**AffineVertex(n, rows, c).to_dict(), "trial": index}

    return moments, describe


def corruption_certificate(
    kind: str,
    n: int,
    k: int,
    delta: float,
    search_mode: str = EXHAUSTIVE,
    trials: int = 1000,
    seed: int = 0,
    alpha1: Optional[float] = None,
    alpha2: Optional[float] = None,
    epsilon: float = DEFAULT_EPSILON,
    tol: float = CERTIFICATE_TOLERANCE,
) -> CorruptionCertificate:
    """Maximize <R, H> over rank-one vertices, or over affine ones for the pdt kind.

    Exhaustive search covers every vertex and needs n <= 3; random search
    draws ``trials`` vertices from counter-based streams keyed by ``seed``.
    """
    H = hyperplane(kind, k, delta, alpha1, alpha2, epsilon)
    flips = sorted(set(H.flip_counts))
    if search_mode == EXHAUSTIVE:
        if n > EXHAUSTIVE_GUARD:
            raise GuardError(f"Exhaustive vertex search limited to n <= {EXHAUSTIVE_GUARD}")
        search = _exhaustive_affine if kind == PDT else _exhaustive_rank_one
        moments, describe = search(n, flips)
        seed = None
    elif search_mode == RANDOM:
        if n > RANDOM_GUARD:
            raise GuardError(f"Random vertex search limited to n <= {RANDOM_GUARD}")
        if trials < 1:
            raise ParameterError(f"Random search needs at least one trial, got {trials}")
        search = _random_affine if kind == PDT else _random_rank_one
        moments, describe = search(n, flips, trials, seed)
    else:
        raise ParameterError(f"Unknown search mode {search_mode!r}")

    values = sum(c * moments[j] for c, j in H.components)
    best = int(np.argmax(values))
    violations = int((values >= H.bound - tol).sum())
    audit = branch_audit(H, moments, tol)
    LOG.info(f"{kind} certificate on n={n}, k={k}: max {values[best]} against {H.bound}")
    if violations:
        LOG.warning(f"{violations} vertices reach the bound {H.bound}")
    return CorruptionCertificate(
        H, n, float(values[best]), describe(best), search_mode, seed, violations, audit
    )


def certificate_report(certificate: CorruptionCertificate, instance: str = "") -> CheckReport:
    H = certificate.hyperplane
    report = CheckReport("corruption", instance or f"{H.kind}(n={certificate.n}, k={H.k})")
    soft = not certificate.guaranteed
    report.add(info_step("vertices searched", certificate.audit.vertices))
    report.add(
        inequality_step(
            "bound > max <R,H>",
            certificate.bound,
            certificate.max_vertex_value,
            0.0,
            soft=soft,
            data={"violations": certificate.violations},
        )
    )
    report.add(identity_step("vertices in neither branch = 0", certificate.audit.neither, 0, 0))
    report.add(
        inequality_step(
            "forced sign failures <= 0", 0, certificate.audit.sign_failures, 0, soft=soft
        )
    )
    report.add(info_step("implied bits lower bound", certificate.implied_bits_lower_bound))
    report.extras.update(certificate.to_dict())
    return report


@dataclass(frozen=True)
class PdtSizeBound:
    n: int
    k: int
    delta: float
    alpha1: float
    vertex_bound: float
    log_size: float
    premise_holds: bool
    delta_in_range: bool

    @property
    def flagged(self) -> bool:
        return not (self.premise_holds and self.delta_in_range)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "delta": self.delta,
            "alpha1": self.alpha1,
            "vertex_bound": self.vertex_bound,
            "log_size": self.log_size,
            "premise_holds": self.premise_holds,
            "delta_in_range": self.delta_in_range,
            "flagged": self.flagged,
        }


def pdt_size_bound(
    n: int, k: int, delta: float, alpha1: Optional[float] = None, epsilon: float = DEFAULT_EPSILON
) -> PdtSizeBound:
    """log((6 delta / k^alpha1)^{-k/2} / 3).

    The premises k^2 < delta n and delta <= 1/9 are recorded, not enforced.
    """
    if k < 2 or delta <= 0:
        raise ParameterError(f"Need k >= 2 and delta > 0, got k={k}, delta={delta}")
    alpha1 = default_alphas(epsilon)[0] if alpha1 is None else alpha1
    vertex_bound = (6 * delta / k**alpha1) ** (k / 2)
    premise, in_range = k * k < delta * n, delta <= 1 / 9
    bound = PdtSizeBound(
        n, k, delta, alpha1, vertex_bound, implied_bits(vertex_bound), premise, in_range
    )
    if bound.flagged:
        LOG.warning(f"PDT bound parameters out of range: k^2 < delta n is {bound.premise_holds}")
    return bound


def dichotomy_audit(
    R: RankOneVertex, k: int, epsilon: float = DEFAULT_EPSILON, tol: float = 1e-9
) -> CheckReport:
    """The dichotomy on (W, u/|u|, v/|v|) for the characteristic vectors of R."""
    instance = f"rank-one(n={R.n}, |U|={len(R.u_set)}, |V|={len(R.v_set)})"
    if not R.u_set or not R.v_set:
        report = CheckReport("hamming-dichotomy", instance)
        report.add(vacuous_step("<R,mu_k> > 0", "empty side"))
        return report
    W = hypercube_kernel(R.n)
    u, v = (NonnegVector(x) for x in R.vectors())
    report = main_dichotomy(W, u, v, k, epsilon, tol, instance, pipeline=False)
    report.check = "hamming-dichotomy"
    if report.extras.get("branch") is None:
        return report

    scale = u.l2 * v.l2 / (1 << R.n)
    report.add(inequality_step("|u| |v| <= 2^n", 1.0, scale, tol))
    alpha1 = default_alphas(epsilon)[0]
    mu_k, mu_upper = walk_moment(R, k), walk_moment(R, k + 2)
    if mu_k <= 0:
        raise ZeroHeatError(f"<R, mu_{k}> vanishes with a positive normalized moment")
    lhs = (2 / k) * math.log2(scale) + math.log2(mu_upper)
    rhs = alpha1 * math.log2(k) + (1 + 2 / k) * math.log2(mu_k)
    report.add(info_step("normalized first branch slack on R", lhs - rhs, mu_k=mu_k))
    return report


def affine_audit(
    n: int,
    k: int,
    delta: float,
    trials: int = 1000,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
) -> CorruptionCertificate:
    """Random (B, c) vertices against the parity decision tree bound."""
    return corruption_certificate(PDT, n, k, delta, RANDOM, trials, seed, epsilon=epsilon)
