"""Base class for instance sources."""

from abc import ABC, abstractmethod
from typing import Iterator

from ..heat.formats import Instance


class InstanceSource(ABC):
    """Abstract base class for all instance sources."""

    @abstractmethod
    def get_instances(self) -> Iterator[Instance]:
        """Get instances from the source.

        Yields:
            Instance records holding the kernel, u, v and a descriptor with at
            least a 'name' usable in reports
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """Get a human-readable name for this source."""
        pass
