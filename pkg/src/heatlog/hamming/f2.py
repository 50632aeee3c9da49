"""Linear algebra over F_2 with points of F_2^n packed into Python ints.

Bit j of a point is coordinate j. A matrix is a tuple of row bitmasks, so
(Bx)_i is the parity of ``rows[i] & x``.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionError, GuardError

ENUMERATION_GUARD = 20


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


def to_bits(x: int, n: int) -> str:
    """Coordinate 0 first."""
    return "".join(str((x >> j) & 1) for j in range(n))


def from_bits(bits: str) -> int:
    return sum(1 << j for j, bit in enumerate(bits) if bit == "1")


def apply(rows: Sequence[int], x: int) -> int:
    return sum(parity(row & x) << i for i, row in enumerate(rows))


def columns(rows: Sequence[int], n: int) -> List[int]:
    """Column j of the matrix as a point of F_2^{len(rows)}."""
    return [sum(((row >> j) & 1) << i for i, row in enumerate(rows)) for j in range(n)]


def _eliminate(rows: Sequence[int], n: int, rhs: Optional[int] = None):
    """Reduced row echelon form of the augmented rows; returns (pivots, consistent).

    ``pivots`` maps a pivot column to its reduced row, with the right-hand side
    bit stored at position n.
    """
    augmented = [row | ((((rhs or 0) >> i) & 1) << n) for i, row in enumerate(rows)]
    mask = (1 << n) - 1
    pivots = {}
    remaining = list(augmented)
    for col in range(n):
        index = next((i for i, row in enumerate(remaining) if (row >> col) & 1), None)
        if index is None:
            continue
        pivot = remaining.pop(index)
        remaining = [row ^ pivot if (row >> col) & 1 else row for row in remaining]
        for key in pivots:
            if (pivots[key] >> col) & 1:
                pivots[key] ^= pivot
        pivots[col] = pivot
    consistent = all(row & mask or not (row >> n) & 1 for row in remaining)
    return pivots, consistent


def rank(rows: Sequence[int], n: int) -> int:
    return len(_eliminate(rows, n)[0])


def solve(rows: Sequence[int], c: int, n: int) -> Optional[int]:
    """One x with Bx = c, or None when c is outside the image."""
    pivots, consistent = _eliminate(rows, n, c)
    if not consistent:
        return None
    return sum(((row >> n) & 1) << col for col, row in pivots.items())


def kernel_basis(rows: Sequence[int], n: int) -> List[int]:
    pivots, _ = _eliminate(rows, n)
    basis = []
    for free in range(n):
        if free in pivots:
            continue
        vector = 1 << free
        for col, row in pivots.items():
            if (row >> free) & 1:
                vector |= 1 << col
        basis.append(vector)
    return basis


def affine_points(rows: Sequence[int], c: int, n: int) -> List[int]:
    """All x in F_2^n with Bx = c, in increasing order."""
    if n > ENUMERATION_GUARD:
        raise GuardError(f"Affine enumeration limited to n <= {ENUMERATION_GUARD}")
    base = solve(rows, c, n)
    if base is None:
        return []
    points = [base]
    for vector in kernel_basis(rows, n):
        points += [p ^ vector for p in points]
    return sorted(points)


def random_matrix(rng: np.random.Generator, n: int, m: Optional[int] = None) -> Tuple[int, ...]:
    """Uniform m x n matrix over F_2, m = n by default."""
    m = n if m is None else m
    return tuple(int(x) for x in rng.integers(0, 1 << n, size=m))


def check_shape(rows: Sequence[int], c: int, n: int) -> None:
    if any(row >> n for row in rows):
        raise DimensionError(f"Matrix rows do not fit in {n} columns")
    if c >> len(rows):
        raise DimensionError(f"Right-hand side does not fit in {len(rows)} rows")
