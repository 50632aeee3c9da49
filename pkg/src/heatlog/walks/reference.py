"""Reference walks F^t and B^t on the augmented space."""

import logging
from typing import Tuple

import numpy as np

from ..core.exceptions import DimensionError, KernelError
from ..heat.arith import is_exact
from ..heat.space import SymmetricKernel, mass_of
from .markov import WALK_GUARD, AugmentedSpace, MarkovWalk, empty_matrix, one

LOG = logging.getLogger(__name__)


def walk_inputs(S: SymmetricKernel, mu, nu) -> Tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Dense kernel and endpoint laws in a common arithmetic mode."""
    if S.size + 2 > WALK_GUARD:
        raise DimensionError(f"Walk constructions limited to {WALK_GUARD - 2} states")
    mu, nu = mass_of(mu), mass_of(nu)
    if len(mu) != S.size or len(nu) != S.size:
        raise DimensionError(f"Endpoint laws do not live on a space of size {S.size}")
    exact = S.exact and is_exact(mu) and is_exact(nu)
    if exact:
        return S.dense(), mu, nu, True
    if not S.is_substochastic():
        raise KernelError(f"Walks need a substochastic kernel, max row sum is {S.max_row_sum}")
    return S.to_float().dense(), mu.astype(float), nu.astype(float), False


def entry_kernel(space: AugmentedSpace, law: np.ndarray, exact: bool) -> np.ndarray:
    """r -> law; every other state falls to the dump."""
    kernel = empty_matrix(space.size, exact)
    kernel[space.r_index, : space.n] = law
    for x in range(space.size):
        if x != space.r_index:
            kernel[x, space.dump_index] = one(exact)
    return kernel


def interior_kernel(space: AugmentedSpace, dense: np.ndarray, exact: bool) -> np.ndarray:
    """One S step on Omega; row deficits, r and the dump all go to the dump."""
    n = space.n
    kernel = empty_matrix(space.size, exact)
    kernel[:n, :n] = dense
    deficit = one(exact) - dense.sum(axis=1)
    if not exact:
        deficit = np.clip(deficit, 0.0, None)
    elif any(d < 0 for d in deficit):
        raise KernelError("Exact kernel is not substochastic")
    kernel[:n, space.dump_index] = deficit
    kernel[space.r_index, space.dump_index] = one(exact)
    kernel[space.dump_index, space.dump_index] = one(exact)
    return kernel


def exit_kernel(space: AugmentedSpace, law: np.ndarray, exact: bool) -> np.ndarray:
    """x -> r with probability law(x), the remainder to the dump."""
    n = space.n
    kernel = empty_matrix(space.size, exact)
    kernel[:n, space.r_index] = law
    kernel[:n, space.dump_index] = one(exact) - law
    kernel[space.r_index, space.dump_index] = one(exact)
    kernel[space.dump_index, space.dump_index] = one(exact)
    return kernel


def _reference_kernels(S: SymmetricKernel, first, last, t: int):
    if t < 0:
        raise DimensionError(f"Walk length must be nonnegative, got {t}")
    dense, first, last, exact = walk_inputs(S, first, last)
    space = AugmentedSpace(S.space)
    kernels = [entry_kernel(space, first, exact)]
    step = interior_kernel(space, dense, exact)
    kernels.extend(step for _ in range(t))
    kernels.append(exit_kernel(space, last, exact))
    return space, kernels, exact


def forward_walk(S: SymmetricKernel, mu, nu, t: int) -> MarkovWalk:
    """F^t: r -> mu at step -1, t steps of S, then back to r with probability nu."""
    space, kernels, exact = _reference_kernels(S, mu, nu, t)
    walk = MarkovWalk(
        space, -1, t + 1, space.point_mass(space.r_index, exact), kernels, name=f"F^{t}"
    )
    LOG.debug(f"Built {walk!r}; return mass {walk.marginal(t + 1)[space.r_index]}")
    return walk


def backward_walk(S: SymmetricKernel, mu, nu, t: int) -> MarkovWalk:
    """B^t: generated from r at step t+1 down to step -1, entering by nu and leaving by mu."""
    space, kernels, exact = _reference_kernels(S, nu, mu, t)
    return MarkovWalk(
        space,
        -1,
        t + 1,
        space.point_mass(space.r_index, exact),
        kernels,
        reversed=True,
        name=f"B^{t}",
    )


def return_mass(walk: MarkovWalk, step: int):
    """Probability that the walk sits at r at the given step."""
    return walk.marginal(step)[walk.space.r_index]
