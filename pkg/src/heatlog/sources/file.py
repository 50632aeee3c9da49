"""File-based instance source."""

import logging
from pathlib import Path
from typing import Iterator, Optional

from ..core.exceptions import SourceError
from ..heat.formats import Instance, load_kernel, load_vector
from ..heat.generators import uniform_unit_vector
from .base import InstanceSource

LOG = logging.getLogger(__name__)


class FileSource(InstanceSource):
    """Instance source that reads a kernel file and two vector files."""

    def __init__(
        self,
        kernel_path: str,
        u_path: Optional[str] = None,
        v_path: Optional[str] = None,
        exact: bool = False,
    ):
        """Initialize file source.

        Args:
            kernel_path: Path to the kernel JSON document
            u_path: Path to the u vector (uniform unit vector when omitted)
            v_path: Path to the v vector (u when omitted)
            exact: Parse weights as rationals
        """
        self.kernel_path = Path(kernel_path)
        self.u_path = Path(u_path) if u_path else None
        self.v_path = Path(v_path) if v_path else None
        self.exact = exact

        for path in (self.kernel_path, self.u_path, self.v_path):
            if path is not None and not path.exists():
                raise SourceError(f"File not found: {path}")

    def load(self) -> Instance:
        kernel = load_kernel(self.kernel_path, self.exact)
        if self.u_path:
            u = load_vector(self.u_path, kernel.space, self.exact)
        else:
            if self.exact:
                raise SourceError("Exact mode needs an explicit u vector file")
            u = uniform_unit_vector(kernel.size)
        v = load_vector(self.v_path, kernel.space, self.exact) if self.v_path else u
        descriptor = {
            "name": self.kernel_path.stem,
            "kernel_file": str(self.kernel_path),
            "u_file": str(self.u_path) if self.u_path else None,
            "v_file": str(self.v_path) if self.v_path else None,
        }
        LOG.debug(f"Loaded {kernel!r} from {self.kernel_path}")
        return Instance(kernel, u, v, descriptor)

    def get_instances(self) -> Iterator[Instance]:
        """Get the single instance described by the files."""
        yield self.load()

    def get_name(self) -> str:
        """Get the name of this source."""
        return f"File: {self.kernel_path.name}"
