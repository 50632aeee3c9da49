"""JSON interchange for kernels, vectors and replayable instances.

Kernel files hold ``{"size": n, "labels": [...], "entries": [[i, j, "w"], ...]}``
with ``i <= j``; vectors are JSON arrays. Weights are decimal strings so that
exact mode can ingest them as rationals.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.exceptions import DimensionError, HeatlogError, SourceError
from .space import NonnegVector, StateSpace, SymmetricKernel

LOG = logging.getLogger(__name__)


def _number(value: Any, exact: bool, where: str):
    try:
        if exact:
            return Fraction(str(value))
        return float(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise SourceError(f"Invalid number {value!r} at {where}: {e}")


def format_number(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def kernel_from_dict(data: Dict[str, Any], exact: bool = False) -> SymmetricKernel:
    if not isinstance(data, dict) or "size" not in data or "entries" not in data:
        raise SourceError("Kernel document must be an object with 'size' and 'entries'")
    size = data["size"]
    if not isinstance(size, int) or size < 1:
        raise SourceError(f"Kernel size must be a positive integer, got {size!r}")
    entries = []
    for index, entry in enumerate(data["entries"]):
        if not isinstance(entry, list) or len(entry) != 3:
            raise SourceError(f"Entry {index} must be a [i, j, w] triple, got {entry!r}")
        i, j, w = entry
        if not isinstance(i, int) or not isinstance(j, int) or i > j:
            raise SourceError(f"Entry {index} must have integer indices with i <= j")
        entries.append((i, j, _number(w, exact, f"entry {index}")))
    try:
        return SymmetricKernel.from_entries(size, entries, exact=exact, labels=data.get("labels"))
    except HeatlogError as e:
        raise SourceError(f"Invalid kernel: {e}")


def kernel_to_dict(S: SymmetricKernel) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "size": S.size,
        "entries": [[i, j, format_number(w)] for i, j, w in S.entries()],
    }
    if S.space.labels:
        data["labels"] = list(S.space.labels)
    return data


def vector_from_list(data: Any, space: Optional[StateSpace] = None, exact: bool = False):
    if not isinstance(data, list):
        raise SourceError("Vector document must be a JSON array")
    if not data:
        raise SourceError("Vector is empty")
    values = [_number(x, exact, f"index {i}") for i, x in enumerate(data)]
    array = np.array(values, dtype=object if exact else float)
    try:
        return NonnegVector(array, space)
    except HeatlogError as e:
        raise SourceError(f"Invalid vector: {e}")


def vector_to_list(vector: NonnegVector) -> List[str]:
    return [format_number(x) for x in vector.values]


def read_json(path) -> Any:
    """Load a JSON file, reporting decoder line numbers in SourceError."""
    path = Path(path)
    if not path.exists():
        raise SourceError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SourceError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")


def load_kernel(path, exact: bool = False) -> SymmetricKernel:
    data = read_json(path)
    try:
        return kernel_from_dict(data, exact)
    except SourceError as e:
        raise SourceError(f"{path}: {e}")


def load_vector(path, space: Optional[StateSpace] = None, exact: bool = False) -> NonnegVector:
    data = read_json(path)
    try:
        return vector_from_list(data, space, exact)
    except SourceError as e:
        raise SourceError(f"{path}: {e}")


@dataclass(frozen=True, eq=False)
class Instance:
    """A (kernel, u, v) triple with a descriptor for reports and replay."""

    kernel: SymmetricKernel
    u: NonnegVector
    v: NonnegVector
    descriptor: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.u) != self.kernel.size or len(self.v) != self.kernel.size:
            raise DimensionError("Instance vectors do not match the kernel size")

    @property
    def name(self) -> str:
        return str(self.descriptor.get("name", f"instance(size={self.kernel.size})"))

    @property
    def exact(self) -> bool:
        return self.kernel.exact and self.u.exact and self.v.exact

    def to_dict(self) -> Dict[str, Any]:
        return {
            "descriptor": dict(self.descriptor),
            "kernel": kernel_to_dict(self.kernel),
            "u": vector_to_list(self.u),
            "v": vector_to_list(self.v),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], exact: bool = False) -> "Instance":
        kernel = kernel_from_dict(data["kernel"], exact)
        return cls(
            kernel,
            vector_from_list(data["u"], kernel.space, exact),
            vector_from_list(data["v"], kernel.space, exact),
            dict(data.get("descriptor", {})),
        )
