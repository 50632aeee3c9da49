"""State spaces, symmetric kernels, vectors and distributions."""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..core.exceptions import DimensionError, KernelError
from .arith import ZERO_THRESHOLD, as_array, is_exact, support_mask

LOG = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StateSpace:
    """A finite state space {0, ..., size-1} with optional display labels."""

    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise DimensionError(f"State space size must be positive, got {self.size}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
            if len(self.labels) != self.size:
                raise DimensionError(
                    f"Got {len(self.labels)} labels for a space of size {self.size}"
                )

    def label(self, index: int) -> str:
        return self.labels[index] if self.labels else str(index)


class SymmetricKernel:
    """A nonnegative symmetric kernel S over a finite state space.

    Float kernels are stored as CSR matrices. Exact kernels are dense numpy
    object arrays of ``Fraction`` and are only meant for small test oracles.
    """

    def __init__(self, matrix, space: Optional[StateSpace] = None):
        if sp.issparse(matrix):
            matrix = sp.csr_matrix(matrix, dtype=float)
            matrix.eliminate_zeros()
            matrix.sort_indices()
            exact = False
        else:
            matrix = np.asarray(matrix)
            exact = matrix.dtype == object
            if not exact:
                matrix = sp.csr_matrix(matrix.astype(float))
                matrix.eliminate_zeros()
                matrix.sort_indices()

        rows, cols = matrix.shape
        if rows != cols:
            raise KernelError(f"Kernel must be square, got shape {matrix.shape}")
        self.space = space or StateSpace(rows)
        if self.space.size != rows:
            raise DimensionError(f"Kernel has {rows} rows but space has {self.space.size}")

        self.exact = exact
        self.matrix = matrix
        self._validate()

    def _validate(self) -> None:
        if self.exact:
            if not np.array_equal(self.matrix, self.matrix.T):
                raise KernelError("Kernel is not symmetric")
            if any(w < 0 for w in self.matrix.ravel()):
                raise KernelError("Kernel has negative entries")
            return
        if (self.matrix != self.matrix.T).nnz:
            raise KernelError("Kernel is not symmetric")
        if self.matrix.nnz and self.matrix.data.min() < 0:
            raise KernelError("Kernel has negative entries")

    @classmethod
    def from_entries(
        cls,
        size: int,
        entries: Sequence[Tuple[int, int, object]],
        exact: bool = False,
        labels: Optional[Sequence[str]] = None,
    ) -> "SymmetricKernel":
        """Build a kernel from upper-triangle triples (i, j, w) with i <= j."""
        space = StateSpace(size, tuple(labels) if labels else None)
        if exact:
            dense = np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)
        else:
            rows, cols, data = [], [], []
        for i, j, w in entries:
            i, j = int(i), int(j)
            if not (0 <= i <= j < size):
                raise KernelError(f"Entry ({i}, {j}) must satisfy 0 <= i <= j < {size}")
            if exact:
                weight = Fraction(w)
                dense[i, j] = weight
                dense[j, i] = weight
            else:
                weight = float(w)
                rows.append(i)
                cols.append(j)
                data.append(weight)
                if i != j:
                    rows.append(j)
                    cols.append(i)
                    data.append(weight)
        if exact:
            return cls(dense, space)
        return cls(sp.csr_matrix((data, (rows, cols)), shape=(size, size)), space)

    @property
    def size(self) -> int:
        return self.space.size

    @cached_property
    def row_sums(self) -> np.ndarray:
        if self.exact:
            return np.array([sum(row, Fraction(0)) for row in self.matrix], dtype=object)
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    @cached_property
    def max_row_sum(self):
        return max(self.row_sums)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """S @ vector; the reduction order is the CSR row order."""
        if self.exact:
            return self.matrix.dot(vector)
        return self.matrix @ vector

    def dense(self) -> np.ndarray:
        if self.exact:
            return self.matrix.copy()
        return self.matrix.toarray()

    def to_float(self) -> "SymmetricKernel":
        if not self.exact:
            return self
        return SymmetricKernel(self.matrix.astype(float), self.space)

    def entries(self) -> Iterator[Tuple[int, int, object]]:
        """Upper-triangle nonzero entries in row-major order."""
        if self.exact:
            for i in range(self.size):
                for j in range(i, self.size):
                    if self.matrix[i, j] != 0:
                        yield i, j, self.matrix[i, j]
            return
        upper = sp.triu(self.matrix, format="coo")
        order = np.lexsort((upper.col, upper.row))
        for idx in order:
            yield int(upper.row[idx]), int(upper.col[idx]), float(upper.data[idx])

    def is_zero(self) -> bool:
        if self.exact:
            return all(w == 0 for w in self.matrix.ravel())
        return self.matrix.nnz == 0

    def is_substochastic(self, tol: float = NORM_TOLERANCE) -> bool:
        if self.exact:
            return self.max_row_sum <= 1
        return self.max_row_sum <= 1 + tol

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"SymmetricKernel(size={self.size}, {mode})"


@dataclass(frozen=True, eq=False)
class NonnegVector:
    """A nonnegative vector over a state space."""

    values: np.ndarray
    space: Optional[StateSpace] = None

    def __post_init__(self):
        values = self.values
        if not isinstance(values, np.ndarray):
            values = as_array(values, exact=any(isinstance(x, Fraction) for x in values))
        if values.ndim != 1:
            raise DimensionError(f"Vector must be one-dimensional, got shape {values.shape}")
        if len(values) == 0:
            raise DimensionError("Vector is empty")
        negative = any(x < 0 for x in values) if is_exact(values) else bool((values < 0).any())
        if negative:
            raise KernelError("Vector has negative entries")
        object.__setattr__(self, "values", values)
        if self.space is None:
            object.__setattr__(self, "space", StateSpace(len(values)))
        elif self.space.size != len(values):
            raise DimensionError(f"Vector length {len(values)} does not match {self.space.size}")

    @property
    def exact(self) -> bool:
        return is_exact(self.values)

    @cached_property
    def l1(self):
        return self.values.sum()

    @cached_property
    def l2_squared(self):
        return (self.values * self.values).sum()

    @cached_property
    def l2(self) -> float:
        return math.sqrt(float(self.l2_squared))

    def unit(self) -> "NonnegVector":
        """The l2-normalized float vector."""
        norm = self.l2
        if norm == 0:
            raise DimensionError("Cannot normalize a zero vector")
        return NonnegVector(self.values.astype(float) / norm, self.space)

    def distribution(self) -> "Distribution":
        """mu = u / ||u||_1."""
        total = self.l1
        if total == 0:
            raise DimensionError("Cannot normalize a zero vector")
        return Distribution(self.values / total, self.space)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Distribution:
    """A nonnegative measure; ``normalized`` when its total is 1."""

    mass: np.ndarray
    space: Optional[StateSpace] = None
    threshold: float = field(default=ZERO_THRESHOLD)

    def __post_init__(self):
        mass = self.mass
        if not isinstance(mass, np.ndarray):
            mass = as_array(mass, exact=any(isinstance(x, Fraction) for x in mass))
            object.__setattr__(self, "mass", mass)
        if self.space is None:
            object.__setattr__(self, "space", StateSpace(len(mass)))
        elif self.space.size != len(mass):
            raise DimensionError(f"Mass length {len(mass)} does not match {self.space.size}")

    @property
    def exact(self) -> bool:
        return is_exact(self.mass)

    @cached_property
    def total(self):
        return self.mass.sum()

    @property
    def normalized(self) -> bool:
        if self.exact:
            return self.total == 1
        return abs(self.total - 1) <= NORM_TOLERANCE

    def support(self) -> np.ndarray:
        return np.flatnonzero(support_mask(self.mass, self.threshold))

    def restrict(self, subset) -> "Distribution":
        """Condition on a subset of states."""
        keep = np.zeros(len(self.mass), dtype=bool)
        keep[list(subset)] = True
        mass = np.where(keep, self.mass, 0)
        if self.exact:
            mass = mass.astype(object)
        total = mass.sum()
        if total == 0:
            raise DimensionError("Conditioning on a null set")
        return Distribution(mass / total, self.space, self.threshold)

    def __len__(self) -> int:
        return len(self.mass)


def mass_of(value) -> np.ndarray:
    """Underlying array of a Distribution, NonnegVector or raw array."""
    if isinstance(value, Distribution):
        return value.mass
    if isinstance(value, NonnegVector):
        return value.values
    if isinstance(value, np.ndarray):
        return value
    return as_array(value, exact=any(isinstance(x, Fraction) for x in value))


def check_same_space(*arrays: np.ndarray) -> int:
    sizes = {len(a) for a in arrays}
    if len(sizes) != 1:
        raise DimensionError(f"Mismatched dimensions: {sorted(sizes)}")
    return sizes.pop()
