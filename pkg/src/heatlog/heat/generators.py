"""Canonical kernels, vectors and seeded random instances."""

import logging
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from ..core.exceptions import GuardError, KernelError
from .space import NonnegVector, StateSpace, SymmetricKernel

LOG = logging.getLogger(__name__)

HYPERCUBE_GUARD = 20
EXACT_GUARD = 16


def trial_generator(seed: int, trial: int = 0) -> np.random.Generator:
    """Counter-based stream for one trial; independent of evaluation order."""
    return np.random.Generator(np.random.Philox(counter=trial, key=seed))


def _dense_exact(size: int) -> np.ndarray:
    return np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)


def path_chain(t: int, epsilon=1, exact: bool = False) -> SymmetricKernel:
    """Path on t+1 states with S(i,i+1) = S(i+1,i) = epsilon."""
    if t < 1:
        raise KernelError(f"Path length must be at least 1, got {t}")
    if epsilon <= 0:
        raise KernelError(f"Path weight must be positive, got {epsilon}")
    weight = Fraction(epsilon) if exact else float(epsilon)
    return SymmetricKernel.from_entries(
        t + 1, [(i, i + 1, weight) for i in range(t)], exact=exact
    )


def hypercube_kernel(n: int, exact: bool = False) -> SymmetricKernel:
    """Normalized adjacency of the Hamming cube on 2^n states."""
    if not 1 <= n <= HYPERCUBE_GUARD:
        raise GuardError(f"Hypercube dimension must be in 1..{HYPERCUBE_GUARD}, got {n}")
    size = 1 << n
    if exact:
        if size > EXACT_GUARD:
            raise GuardError(f"Exact hypercube limited to {EXACT_GUARD} states")
        dense = _dense_exact(size)
        for x in range(size):
            for j in range(n):
                dense[x, x ^ (1 << j)] = Fraction(1, n)
        return SymmetricKernel(dense)
    states = np.arange(size)
    rows = np.repeat(states, n)
    cols = (rows ^ np.tile(1 << np.arange(n), size)).astype(np.int64)
    data = np.full(rows.shape, 1.0 / n)
    return SymmetricKernel(sp.csr_matrix((data, (rows, cols)), shape=(size, size)))


def complete_graph_kernel(n: int, exact: bool = False) -> SymmetricKernel:
    """Uniform stochastic kernel on K_n without loops."""
    if n < 2:
        raise KernelError("Complete graph needs at least two states")
    weight = Fraction(1, n - 1) if exact else 1.0 / (n - 1)
    return SymmetricKernel.from_entries(
        n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)], exact=exact
    )


def swap_kernel(exact: bool = False) -> SymmetricKernel:
    """The two-state kernel [[0,1],[1,0]]."""
    return SymmetricKernel.from_entries(2, [(0, 1, 1)], exact=exact)


def identity_kernel(n: int, exact: bool = False) -> SymmetricKernel:
    return SymmetricKernel.from_entries(n, [(i, i, 1) for i in range(n)], exact=exact)


def zero_kernel(n: int) -> SymmetricKernel:
    return SymmetricKernel(sp.csr_matrix((n, n)))


def scale_kernel(S: SymmetricKernel, c) -> SymmetricKernel:
    if c <= 0:
        raise KernelError(f"Scale must be positive, got {c}")
    if S.exact:
        return SymmetricKernel(S.matrix * Fraction(c), S.space)
    return SymmetricKernel(S.matrix * float(c), S.space)


def unit_vector(size: int, index: int, exact: bool = False) -> NonnegVector:
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    values = np.array([zero] * size, dtype=object if exact else float)
    values[index] = one
    return NonnegVector(values, StateSpace(size))


def constant_vector(size: int, value=1, exact: bool = False) -> NonnegVector:
    if exact:
        return NonnegVector(np.array([Fraction(value)] * size, dtype=object))
    return NonnegVector(np.full(size, float(value)))


def uniform_unit_vector(size: int) -> NonnegVector:
    """The l2-unit vector 1/sqrt(size)."""
    return NonnegVector(np.full(size, 1.0 / np.sqrt(size)))


def _draw_kernel(rng: np.random.Generator, size: int, density: float) -> SymmetricKernel:
    pairs = [(i, j) for i in range(size) for j in range(i, size)]
    present = rng.random(len(pairs)) < density
    # uniform(0,1] weights
    weights = 1.0 - rng.random(len(pairs))
    entries = [(i, j, w) for (i, j), keep, w in zip(pairs, present, weights) if keep]
    if not entries:
        entries = [(0, 0, 1.0)]
    kernel = SymmetricKernel.from_entries(size, entries)
    return SymmetricKernel(kernel.matrix / float(kernel.max_row_sum), kernel.space)


def random_instance(
    size: int, density: float = 0.5, seed: int = 0, trial: int = 0
) -> Tuple[SymmetricKernel, NonnegVector, NonnegVector]:
    """Seeded random substochastic kernel with l2-unit vectors u, v.

    Every unordered pair {i, j}, loops included, is present with probability
    ``density``. An empty draw falls back to the single loop (0, 0).
    """
    if size < 1:
        raise KernelError(f"Instance size must be positive, got {size}")
    if not 0 < density <= 1:
        raise KernelError(f"Density must be in (0, 1], got {density}")
    rng = trial_generator(seed, trial)
    kernel = _draw_kernel(rng, size, density)
    u = rng.random(size)
    v = rng.random(size)
    return kernel, NonnegVector(u / np.linalg.norm(u)), NonnegVector(v / np.linalg.norm(v))


def random_rational_instance(
    size: int, seed: int = 0, trial: int = 0, denominator: int = 8, density: float = 0.6
) -> Tuple[SymmetricKernel, NonnegVector, NonnegVector]:
    """Exact instance with small-denominator weights, for zero-tolerance oracles.

    The kernel is substochastic (rows scaled by the maximal row sum) and the
    vectors are strictly positive, so every heat moment is positive whenever
    the kernel is connected enough; callers check m_t > 0 themselves.
    """
    if size > EXACT_GUARD:
        raise GuardError(f"Exact instances limited to {EXACT_GUARD} states")
    rng = trial_generator(seed, trial)
    entries = []
    for i in range(size):
        for j in range(i, size):
            if rng.random() < density:
                entries.append((i, j, Fraction(int(rng.integers(1, denominator + 1)), denominator)))
    for i in range(size - 1):
        if not any(a == i and b == i + 1 for a, b, _ in entries):
            entries.append((i, i + 1, Fraction(1, denominator)))
    kernel = SymmetricKernel.from_entries(size, entries, exact=True)
    scale = Fraction(kernel.max_row_sum)
    kernel = SymmetricKernel(kernel.matrix / scale, kernel.space)
    u = np.array([Fraction(int(x), denominator) for x in rng.integers(1, denominator + 1, size)])
    v = np.array([Fraction(int(x), denominator) for x in rng.integers(1, denominator + 1, size)])
    return kernel, NonnegVector(u.astype(object)), NonnegVector(v.astype(object))


def eigen_pair_instance(
    half: int = 3, seed: int = 0
) -> Tuple[SymmetricKernel, NonnegVector, NonnegVector]:
    """Instance with Su = lambda v and Sv = lambda u.

    S = [[0, A], [A, 0]] with A a symmetric circulant block, so every row of A
    has the same sum lambda; u is uniform on the first half and v on the second.
    """
    rng = trial_generator(seed, 0)
    raw = rng.random(half) + 0.1
    weights = (raw + np.roll(raw[::-1], 1)) / (2 * half)
    block = np.array([[weights[(j - i) % half] for j in range(half)] for i in range(half)])
    dense = np.zeros((2 * half, 2 * half))
    dense[:half, half:] = block
    dense[half:, :half] = block
    u = np.zeros(2 * half)
    v = np.zeros(2 * half)
    u[:half] = 1.0 / np.sqrt(half)
    v[half:] = 1.0 / np.sqrt(half)
    return SymmetricKernel(dense), NonnegVector(u), NonnegVector(v)
