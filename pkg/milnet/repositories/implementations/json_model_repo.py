"""
JSON model repository implementation

Stores networks as model-file JSON documents.
"""

import logging
from pathlib import Path

from milnet.domain.errors import ModelFormatError
from milnet.domain.models import Network
from milnet.dto.base import ValidationError, parse_json
from milnet.dto.model_document import ModelDocument
from milnet.repositories.model_repository import IModelRepository


logger = logging.getLogger(__name__)


class JsonModelRepository(IModelRepository):
    """Model storage in JSON files."""

    def save(self, key: str, entity: Network) -> None:
        path = Path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ModelDocument(network=entity).to_json(), encoding="utf-8")
        logger.info(f"Wrote model {key}", extra={'path': key})

    def load(self, key: str) -> Network:
        """
        Load a network.

        Raises:
            OSError: If the file cannot be read
            ModelFormatError: If the file is not a valid model document
        """
        text = Path(key).read_text(encoding="utf-8")
        try:
            data = parse_json(text, key)
        except ValidationError as error:
            raise ModelFormatError(str(error)) from error
        return ModelDocument.from_dict(data).network

    def exists(self, key: str) -> bool:
        return Path(key).is_file()
