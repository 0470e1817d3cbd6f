"""
Split plan repository interface

Storage of cross-validation split plans (repetition,fold,bag_id rows).
"""

from milnet.domain.models import SplitPlan
from milnet.repositories.base import IRepository


class IPlanRepository(IRepository[SplitPlan]):
    """Split plan repository interface."""
