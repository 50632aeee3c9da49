"""Heat moment sequences m_t = <v, S^t u>."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from ..core.exceptions import DimensionError, GuardError, KernelError
from .arith import log2_value
from .space import NonnegVector, SymmetricKernel

LOG = logging.getLogger(__name__)

SPECTRAL_GUARD = 2048


@dataclass(frozen=True)
class MomentSequence:
    """Values m_0..m_tmax with their base-2 logarithms."""

    values: Tuple
    log_values: Tuple[float, ...]
    provenance: str = ""

    @property
    def t_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, t: int):
        return self.values[t]

    def log(self, t: int) -> float:
        return self.log_values[t]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values, provenance: str = "") -> "MomentSequence":
        values = tuple(values)
        return cls(values, tuple(log2_value(m) for m in values), provenance)

    def to_rows(self):
        return [
            {"t": t, "m": float(m), "log2_m": self.log_values[t]}
            for t, m in enumerate(self.values)
        ]


def _check_vectors(S: SymmetricKernel, u: NonnegVector, v: NonnegVector) -> None:
    if len(u) != S.size or len(v) != S.size:
        raise DimensionError(
            f"Vectors of length {len(u)} and {len(v)} do not live on a space of size {S.size}"
        )


def moment_sequence(
    S: SymmetricKernel, u: NonnegVector, v: NonnegVector, t_max: int, provenance: str = ""
) -> MomentSequence:
    """Moments by iterated sparse matrix-vector products."""
    _check_vectors(S, u, v)
    if t_max < 0:
        raise DimensionError(f"t_max must be nonnegative, got {t_max}")

    exact = S.exact and u.exact and v.exact
    current = u.values if exact else u.values.astype(float)
    target = v.values if exact else v.values.astype(float)
    kernel = S if exact else S.to_float()

    values = []
    for t in range(t_max + 1):
        m = target.dot(current)
        values.append(m if exact else max(float(m), 0.0))
        if t < t_max:
            current = kernel.apply(current)
    LOG.debug(f"Computed {t_max + 1} moments on {S.size} states ({'exact' if exact else 'float'})")
    return MomentSequence.from_values(values, provenance)


def spectral_moments(
    S: SymmetricKernel, u: NonnegVector, v: NonnegVector, t_max: int, provenance: str = ""
) -> MomentSequence:
    """Moments from the eigendecomposition sum_x lambda_x^t <u,q_x><v,q_x>."""
    _check_vectors(S, u, v)
    if S.size > SPECTRAL_GUARD:
        raise GuardError(f"Spectral oracle limited to {SPECTRAL_GUARD} states, got {S.size}")

    eigenvalues, eigenvectors = np.linalg.eigh(S.to_float().dense())
    weights = (eigenvectors.T @ u.values.astype(float)) * (eigenvectors.T @ v.values.astype(float))
    values = []
    powers = np.ones_like(eigenvalues)
    for _ in range(t_max + 1):
        values.append(max(float(np.dot(powers, weights)), 0.0))
        powers = powers * eigenvalues
    return MomentSequence.from_values(values, provenance)


def normalize_substochastic(S: SymmetricKernel) -> Tuple[SymmetricKernel, object]:
    """Scale S so that its maximal row sum is 1."""
    if S.is_zero():
        raise KernelError("Cannot normalize the all-zero kernel")
    scale = S.max_row_sum
    if S.exact:
        return SymmetricKernel(S.matrix / Fraction(scale), S.space), Fraction(scale)
    scale = float(scale)
    return SymmetricKernel(S.matrix / scale, S.space), scale


def walk_count_density(G: SymmetricKernel, k: int) -> float:
    """Number of length-k walks in the 0/1 graph G divided by |V|."""
    entries = G.matrix.ravel() if G.exact else G.matrix.data
    if any(w not in (0, 1) for w in entries):
        raise KernelError("Walk counting needs a 0/1 adjacency matrix")
    ones = np.ones(G.size)
    adjacency = G.to_float()
    current = ones
    for _ in range(k):
        current = adjacency.apply(current)
    return float(ones.dot(current)) / G.size
