"""
Model repository interface

Storage of trained networks (model JSON documents).
"""

from milnet.domain.models import Network
from milnet.repositories.base import IRepository


class IModelRepository(IRepository[Network]):
    """
    Model repository interface.

    save() followed by load() must reproduce every parameter bit for bit.
    """
