"""
Base repository interfaces

Defines the generic artifact-store pattern. Services and controllers depend
on these interfaces, so file formats (CSV, JSON) can be swapped without
touching business logic.
"""

from abc import ABC, abstractmethod
from typing import Generic, TypeVar

# Generic type for repository entities
T = TypeVar('T')


class IRepository(ABC, Generic[T]):
    """
    Generic repository interface.

    Entities are addressed by a key (a file path for the file-backed
    implementations).

    Type parameter T: The entity type this repository manages
    """

    @abstractmethod
    def save(self, key: str, entity: T) -> None:
        """
        Persist an entity under key, replacing any previous content.

        Args:
            key: Location of the entity
            entity: Entity to persist

        Raises:
            OSError: If the location cannot be written
        """
        pass

    @abstractmethod
    def load(self, key: str) -> T:
        """
        Load the entity stored under key.

        Args:
            key: Location of the entity

        Returns:
            The entity

        Raises:
            OSError: If the location cannot be read
            MilError: If the content is malformed
        """
        pass

    @abstractmethod
    def exists(self, key: str) -> bool:
        """
        Check if an entity is stored under key.

        Args:
            key: Location to check

        Returns:
            True if an entity exists, False otherwise
        """
        pass
