"""
In-memory repository implementations

Thread-safe in-memory storage for datasets, split plans and models.
Suitable for tests and for pipelines that never touch the filesystem.
"""

from threading import Lock
from typing import Dict, Generic, TypeVar

from milnet.domain.models import MilDataset, Network, SplitPlan
from milnet.repositories.base import IRepository
from milnet.repositories.dataset_repository import IDatasetRepository
from milnet.repositories.model_repository import IModelRepository
from milnet.repositories.plan_repository import IPlanRepository

T = TypeVar('T')


class InMemoryRepository(IRepository[T], Generic[T]):
    """
    Thread-safe key -> entity store.

    Entities are immutable domain values, so they are stored as-is.
    Thread-safety: Uses threading.Lock for all mutations
    """

    def __init__(self):
        """Initialize empty in-memory storage with lock."""
        self._storage: Dict[str, T] = {}
        self._lock = Lock()

    def save(self, key: str, entity: T) -> None:
        with self._lock:
            self._storage[key] = entity

    def load(self, key: str) -> T:
        """
        Load an entity.

        Raises:
            FileNotFoundError: If nothing is stored under key
        """
        with self._lock:
            if key not in self._storage:
                raise FileNotFoundError(f"No entity stored under '{key}'")
            return self._storage[key]

    def exists(self, key: str) -> bool:
        with self._lock:
            return key in self._storage

    def clear(self) -> None:
        """Remove everything (for testing)."""
        with self._lock:
            self._storage.clear()


class InMemoryDatasetRepository(InMemoryRepository[MilDataset], IDatasetRepository):
    """In-memory dataset storage."""


class InMemoryPlanRepository(InMemoryRepository[SplitPlan], IPlanRepository):
    """In-memory split plan storage."""


class InMemoryModelRepository(InMemoryRepository[Network], IModelRepository):
    """In-memory model storage."""
