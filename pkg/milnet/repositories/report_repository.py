"""
Report repository interface

Storage of evaluation reports and grid-search tables.
"""

from abc import abstractmethod

from milnet.domain.models import EvalReport, GridSearchResult
from milnet.repositories.base import IRepository


class IReportRepository(IRepository[EvalReport]):
    """
    Report repository interface.

    Extends IRepository[EvalReport] with grid-search tables.
    """

    @abstractmethod
    def save_grid_search(self, key: str, result: GridSearchResult) -> None:
        """
        Persist a grid-search table under key.

        Args:
            key: Location of the table
            result: Grid-search outcome
        """
        pass
