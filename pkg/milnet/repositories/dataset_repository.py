"""
Dataset repository interface

Storage of MIL datasets in the bag_id,label,f1,...,fd CSV contract.
"""

from milnet.domain.models import MilDataset
from milnet.repositories.base import IRepository


class IDatasetRepository(IRepository[MilDataset]):
    """
    Dataset repository interface.

    load() must preserve bag order of first appearance and row order within
    each bag; save() followed by load() must reproduce the dataset exactly.
    """
