"""
Document base class and field helpers

Documents wrap domain values for the files milnet reads and writes: model
JSON, evaluation reports and key=value training configs.
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, Mapping


class ValidationError(Exception):
    """Raised when a document or a command-line option holds an invalid value."""


@dataclass
class BaseDTO:
    """
    Base class for file documents.

    Subclasses implement to_dict(); JSON rendering is shared.
    """

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError(f"{type(self).__name__} does not serialize to a mapping")

    def to_json(self) -> str:
        """Indented JSON text ending in a newline."""
        return json.dumps(self.to_dict(), indent=2) + "\n"


def parse_json(text: str, source: str) -> Dict[str, Any]:
    """
    Decode a JSON object.

    Raises:
        ValidationError: If the text is not JSON or not an object
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ValidationError(f"{source}: not valid JSON ({error})") from error
    if not isinstance(data, dict):
        raise ValidationError(f"{source}: expected a JSON object, got {type(data).__name__}")
    return data


def require_field(data: Mapping[str, Any], field: str) -> Any:
    """
    Value of a mandatory field.

    Raises:
        ValidationError: If data is not a mapping or lacks the field

    Examples:
        >>> require_field({"pool": "mean"}, "pool")
        'mean'
    """
    if not isinstance(data, Mapping):
        raise ValidationError(f"Expected an object holding '{field}'")
    if field not in data:
        raise ValidationError(f"Missing required field: {field}")
    return data[field]


def get_field(data: Mapping[str, Any], field: str, default: Any = None) -> Any:
    return data.get(field, default)


def format_float(value: float) -> str:
    """
    Shortest decimal text that reads back to the identical double.

    Examples:
        >>> format_float(0.1)
        '0.1'
        >>> float(format_float(1 / 3)) == 1 / 3
        True
    """
    return repr(float(value))
