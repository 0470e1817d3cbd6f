"""
Domain errors for milnet

Every failure raised by the services derives from MilError so callers
(and the CLI error handler) can treat them uniformly.
"""

from typing import Optional


class MilError(Exception):
    """Base class for all milnet domain errors."""


class DatasetParseError(MilError, ValueError):
    """A dataset file row could not be parsed."""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DatasetConsistencyError(MilError, ValueError):
    """Rows of one bag disagree (e.g. conflicting labels)."""

    def __init__(self, message: str, bag_id: str):
        self.bag_id = bag_id
        super().__init__(message)


class EmptyDatasetError(MilError, ValueError):
    """A dataset (or bag) holds no data."""


class DimensionMismatchError(MilError, ValueError):
    """Feature dimensions of two objects disagree."""


class InfeasibleStratificationError(MilError, ValueError):
    """A class has fewer bags than requested folds."""


class ShapeMismatchError(MilError, ValueError):
    """Parameter-shaped objects are not congruent."""


class StaleTraceError(MilError, ValueError):
    """A forward trace does not belong to the network it is used with."""


class SingleClassError(MilError, ValueError):
    """A scoring metric needs both classes but got only one."""


class PlanMismatchError(MilError, ValueError):
    """A split plan does not cover exactly the bags of a dataset."""


class InvalidArchitectureError(MilError, ValueError):
    """An architecture or pooling choice violates its invariants."""


class InvalidSpecError(MilError, ValueError):
    """A synthetic-data specification violates its invariants."""


class ModelFormatError(MilError, ValueError):
    """A model file is malformed or of an unsupported version."""


class InvalidConfigError(MilError, ValueError):
    """A training or evaluation configuration violates its invariants."""
