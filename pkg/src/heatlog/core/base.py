"""Base class for verification checkers."""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from .reports import CheckReport

LOG = logging.getLogger(__name__)


class Checker(ABC):
    """Base class for all verification checkers.

    Checkers should inherit from this class and implement the check method.
    """

    # Checker metadata (can be overridden in subclasses)
    name: str = ""
    description: str = ""

    def __init__(
        self,
        tol: float = 1e-9,
        epsilon: float = 0.95,
        delta: Optional[float] = None,
        t_max: int = 10,
        debug: bool = False,
    ) -> None:
        """Initialize the checker.

        Args:
            tol: Log-domain tolerance for pass verdicts
            epsilon: Exponent loss in the near-log-convexity dichotomy
            delta: Second-branch constant (derived from epsilon when None)
            t_max: Largest time step examined
            debug: Enable debug logging
        """
        self.tol = tol
        self.epsilon = epsilon
        self.delta = delta
        self.t_max = t_max
        self.debug = debug

        if self.debug:
            logging.getLogger().setLevel(logging.DEBUG)

    @abstractmethod
    def check(self, instance) -> List[CheckReport]:
        """Run the checker's suite on one instance.

        Args:
            instance: The heat.formats.Instance to verify

        Returns:
            One report per verified claim
        """
        pass

    def get_metadata(self) -> Dict[str, Any]:
        """Get checker metadata."""
        return {
            "name": self.name or self.__class__.__name__.lower().replace("checker", ""),
            "description": self.description or f"Verifies {self.name or 'heat moments'}",
            "class": self.__class__.__name__,
            "module": self.__module__,
        }

    def __str__(self) -> str:
        return self.name or self.__class__.__name__

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(tol={self.tol}, epsilon={self.epsilon}, "
            f"delta={self.delta}, t_max={self.t_max})"
        )
