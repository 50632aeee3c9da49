"""The forward walk conditioned on returning to r at step t+1."""

import logging
from typing import List

import numpy as np

from ..core.exceptions import DimensionError, ZeroHeatError
from ..heat.space import SymmetricKernel
from .markov import AugmentedSpace, MarkovWalk, empty_matrix, empty_vector, one
from .reference import walk_inputs

LOG = logging.getLogger(__name__)


class ConditionedWalk(MarkovWalk):
    """X = (F^t | F^t_{t+1} = r), built from its closed-form kernels.

    ``h[i] = S^{t-i} nu`` is the probability of a successful return from step i
    and ``g[i] = S^i mu`` the mass arriving at step i, so that
    ``Pr[X_i = x] = g[i](x) h[i](x) / heat`` with ``heat = S^t(mu, nu)``.
    """

    def __init__(self, S: SymmetricKernel, mu, nu, t: int):
        if t < 0:
            raise DimensionError(f"Walk length must be nonnegative, got {t}")
        dense, mu, nu, exact = walk_inputs(S, mu, nu)
        self.source = S
        self.kernel = dense
        self.mu = mu
        self.nu = nu
        self.t = t

        self.h: List[np.ndarray] = [None] * (t + 1)
        self.h[t] = nu
        for i in range(t - 1, -1, -1):
            self.h[i] = dense.dot(self.h[i + 1])
        self.g: List[np.ndarray] = [mu]
        for _ in range(t):
            self.g.append(dense.dot(self.g[-1]))

        self.heat = mu.dot(self.h[0])
        if not self.heat > 0:
            raise ZeroHeatError(f"S^{t}(mu, nu) = {self.heat}; conditioning on a null event")

        space = AugmentedSpace(S.space)
        kernels = [self._entry(space, exact)]
        kernels.extend(self.closed_form_forward_kernel(i, space, exact) for i in range(t))
        kernels.append(self._exit(space, exact))
        super().__init__(
            space, -1, t + 1, space.point_mass(space.r_index, exact), kernels, name=f"X^{t}"
        )
        LOG.debug(f"Conditioned walk on {S.size} states, t={t}, heat={self.heat}")

    def _entry(self, space: AugmentedSpace, exact: bool) -> np.ndarray:
        kernel = empty_matrix(space.size, exact)
        kernel[space.r_index, : space.n] = self.mu * self.h[0] / self.heat
        for x in range(space.size):
            if x != space.r_index:
                kernel[x, space.dump_index] = one(exact)
        return kernel

    def _exit(self, space: AugmentedSpace, exact: bool) -> np.ndarray:
        kernel = empty_matrix(space.size, exact)
        for x in range(space.n):
            target = space.r_index if self.nu[x] > 0 else space.dump_index
            kernel[x, target] = one(exact)
        kernel[space.r_index, space.dump_index] = one(exact)
        kernel[space.dump_index, space.dump_index] = one(exact)
        return kernel

    def closed_form_forward_kernel(self, i: int, space=None, exact=None) -> np.ndarray:
        """dist(X_{i+1} | X_i = x) = S(x, y) h[i+1](y) / h[i](x) for 0 <= i < t."""
        if not 0 <= i < self.t:
            raise DimensionError(f"Forward kernel defined for 0 <= i < {self.t}, got {i}")
        space = space or self.space
        exact = self.exact if exact is None else exact
        kernel = empty_matrix(space.size, exact)
        h_now, h_next = self.h[i], self.h[i + 1]
        for x in range(space.n):
            if h_now[x] > 0:
                kernel[x, : space.n] = self.kernel[x] * h_next / h_now[x]
            else:
                kernel[x, space.dump_index] = one(exact)
        kernel[space.r_index, space.dump_index] = one(exact)
        kernel[space.dump_index, space.dump_index] = one(exact)
        return kernel

    def closed_form_backward_kernel(self, i: int) -> np.ndarray:
        """dist(X_{i-1} | X_i = x) for 0 <= i <= t+1.

        Interior steps use S(x, y) g[i-1](y) / g[i](x); rows off the support of
        g[i] are left empty.
        """
        space, exact = self.space, self.exact
        kernel = empty_matrix(space.size, exact)
        if i == 0:
            kernel[: space.n, space.r_index] = one(exact)
            return kernel
        if i == self.t + 1:
            kernel[space.r_index] = self.marginal(self.t)
            return kernel
        if not 0 < i <= self.t:
            raise DimensionError(f"Backward kernel defined for 0 <= i <= {self.t + 1}, got {i}")
        g_now, g_prev = self.g[i], self.g[i - 1]
        for x in range(space.n):
            if g_now[x] > 0:
                kernel[x, : space.n] = self.kernel[x] * g_prev / g_now[x]
        return kernel

    def closed_form_marginal(self, i: int) -> np.ndarray:
        """Pr[X_i = x] = S^i(mu, x) S^{t-i}(x, nu) / S^t(mu, nu)."""
        if not 0 <= i <= self.t:
            raise DimensionError(f"Closed-form marginal defined for 0 <= i <= {self.t}")
        out = empty_vector(self.space.size, self.exact)
        out[: self.space.n] = self.g[i] * self.h[i] / self.heat
        return out


def conditioned_walk(S: SymmetricKernel, mu, nu, t: int) -> ConditionedWalk:
    return ConditionedWalk(S, mu, nu, t)


def _row_residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs((a - b).astype(float)))) if a.size else 0.0


def verify_closed_form_kernels(X: ConditionedWalk) -> dict:
    """Largest deviation of the closed forms from pushed marginals and Bayes reversal.

    Rows are compared on the support of the conditioning marginal only.
    """
    marginal_residual = 0.0
    for i in range(X.t + 1):
        marginal_residual = max(
            marginal_residual, _row_residual(X.closed_form_marginal(i), X.marginal(i))
        )

    backward_residual = 0.0
    for i in range(0, X.t + 2):
        support = np.flatnonzero(X.marginal(i).astype(float) > 0)
        closed = X.closed_form_backward_kernel(i)[support]
        bayes = X.conditional(i, i - 1)[support]
        backward_residual = max(backward_residual, _row_residual(closed, bayes))
    return {"marginal_residual": marginal_residual, "backward_residual": backward_residual}
