"""Checker registry and auto-discovery system."""

import importlib
import inspect
import pkgutil
import logging
from pathlib import Path
from typing import Dict, Type, List, Any

from .exceptions import CheckerError

LOG = logging.getLogger(__name__)


class CheckerRegistry:
    """Registry for dynamically loaded checkers."""

    def __init__(self):
        self._checkers: Dict[str, Type[Any]] = {}
        self._loaded = False

    def load_checkers(self) -> Dict[str, Type]:
        """Dynamically load all checkers from the checks directory."""
        if self._loaded:
            return self._checkers

        from .base import Checker

        self._checkers.clear()
        checks_path = Path(__file__).parent.parent / "checks"

        if not checks_path.exists():
            LOG.warning(f"Checks directory not found: {checks_path}")
            return self._checkers

        LOG.debug(f"Scanning for checkers in: {checks_path}")

        for module_info in sorted(pkgutil.iter_modules([str(checks_path)]), key=lambda m: m.name):
            if module_info.name.startswith("_"):
                continue

            try:
                module = importlib.import_module(f"heatlog.checks.{module_info.name}")

                found_checker = False
                for _, obj in inspect.getmembers(module, inspect.isclass):
                    if (
                        issubclass(obj, Checker)
                        and obj is not Checker
                        and obj.__module__ == module.__name__
                    ):
                        checker_name = getattr(obj, "name", None) or module_info.name

                        if checker_name in self._checkers:
                            LOG.warning(
                                f"Duplicate checker '{checker_name}' in {module_info.name}"
                            )
                            continue

                        self._checkers[checker_name] = obj
                        LOG.debug(f"Registered checker: {checker_name} -> {obj.__name__}")
                        found_checker = True
                        break

                if not found_checker:
                    LOG.warning(f"No Checker subclass found in module: {module_info.name}")

            except ImportError as e:
                LOG.error(f"Failed to import checker module {module_info.name}: {e}")
                continue

        self._loaded = True
        LOG.debug(f"Loaded {len(self._checkers)} checkers: {list(self._checkers.keys())}")
        return self._checkers

    def get_checker(self, name: str) -> Type[Any]:
        """Get a checker by name."""
        if not self._loaded:
            self.load_checkers()

        if name not in self._checkers:
            available = list(self._checkers.keys())
            raise CheckerError(f"Unknown checker '{name}'. Available: {available}")

        return self._checkers[name]

    def list_checkers(self) -> List[str]:
        """List all available checker names."""
        if not self._loaded:
            self.load_checkers()
        return list(self._checkers.keys())

    def get_checker_info(self) -> Dict[str, Dict]:
        """Get detailed information about all checkers."""
        if not self._loaded:
            self.load_checkers()

        info = {}
        for name, checker_class in self._checkers.items():
            try:
                info[name] = checker_class().get_metadata()
            except Exception as e:
                info[name] = {"name": name, "class": checker_class.__name__, "error": str(e)}
        return info


# Global registry instance
_registry = CheckerRegistry()


def get_checkers() -> Dict[str, Type[Any]]:
    """Get all loaded checkers."""
    return _registry.load_checkers()


def get_checker(name: str) -> Type[Any]:
    """Get a specific checker by name."""
    return _registry.get_checker(name)


def list_checkers() -> List[str]:
    """List all available checker names."""
    return _registry.list_checkers()


def get_checker_info() -> Dict[str, Dict]:
    """Get detailed information about all checkers."""
    return _registry.get_checker_info()
