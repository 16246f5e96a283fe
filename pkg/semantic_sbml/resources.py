"""
Cached loading of packaged data files.

Data files ship under ``semantic_sbml/data/``; lookups go through
importlib.resources first and fall back to paths next to the package source.
"""

import importlib.resources
import importlib.util
import logging
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

DATA_PACKAGE = "semantic_sbml"
DATA_DIRECTORY = "data"


class ResourceCache:
    """Caches packaged text resources by (package, directory, filename)."""

    def __init__(self) -> None:
        self._cache: dict[str, str] = {}
        self._not_found: set[str] = set()

    def clear(self) -> None:
        self._cache.clear()
        self._not_found.clear()

    def get_resource(
        self,
        filename: str,
        directory: str = DATA_DIRECTORY,
        package: str = DATA_PACKAGE,
    ) -> Optional[str]:
        """
        Get a resource file's text, loading it once.

        Args:
            filename: Name of the file inside ``directory``
            directory: Directory within ``package``
            package: Package containing the resource

        Returns:
            File content, or None if the resource does not exist
        """
        cache_key = f"{package}:{directory}:{filename}"
        if cache_key in self._cache:
            return self._cache[cache_key]
        if cache_key in self._not_found:
            return None

        content = self._from_package(package, directory, filename)
        if content is None:
            content = self._from_source_tree(package, directory, filename)

        if content is None:
            self._not_found.add(cache_key)
            logger.debug(f"Resource not found: {cache_key}")
        else:
            self._cache[cache_key] = content
            logger.debug(f"Cached resource: {cache_key}")
        return content

    def _from_package(self, package: str, directory: str, filename: str) -> Optional[str]:
        try:
            resource = importlib.resources.files(package) / directory / filename
            if resource.is_file():
                return resource.read_text(encoding="utf-8")
        except (ModuleNotFoundError, OSError) as e:
            logger.debug(f"importlib.resources failed: {e}")
        return None

    def _from_source_tree(self, package: str, directory: str, filename: str) -> Optional[str]:
        spec = importlib.util.find_spec(package)
        if spec is None or spec.origin is None:
            return None
        path = Path(spec.origin).parent / directory / filename
        try:
            return path.read_text(encoding="utf-8") if path.is_file() else None
        except OSError as e:
            logger.debug(f"Reading {path} failed: {e}")
            return None


_global_cache = ResourceCache()


def get_data_file(filename: str) -> Optional[str]:
    """Text of a packaged data file from the shared cache."""
    return _global_cache.get_resource(filename)


def clear_cache() -> None:
    _global_cache.clear()
