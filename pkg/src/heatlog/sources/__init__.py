"""Instance sources for heatlog."""

from .base import InstanceSource
from .file import FileSource
from .fixtures import FixtureSource, list_fixtures
from .random import RandomSource

__all__ = ["InstanceSource", "FileSource", "FixtureSource", "RandomSource", "list_fixtures"]
