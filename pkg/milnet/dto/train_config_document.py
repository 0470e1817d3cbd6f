"""
Training config document

Flat key=value rendering of TrainConfig, parsed with python-dotenv:

    batch_size=100
    max_iterations=10000
    lambda=1e-05
    standardize=true
"""

import os
from dataclasses import dataclass, fields
from typing import Any, Callable, Dict, Mapping, Optional

from dotenv import dotenv_values

from milnet.domain.enums import LossKind
from milnet.domain.errors import InvalidConfigError
from milnet.domain.models import TrainConfig
from milnet.dto.base import BaseDTO, ValidationError, format_float

TRUE_VALUES = ("true", "1", "yes", "on")
FALSE_VALUES = ("false", "0", "no", "off")

# file key -> TrainConfig field
KEY_TO_FIELD: Dict[str, str] = {
    "batch_size": "batch_size",
    "max_iterations": "max_iterations",
    "lambda": "lam",
    "alpha": "alpha",
    "beta1": "beta1",
    "beta2": "beta2",
    "epsilon": "epsilon",
    "seed": "seed",
    "standardize": "standardize",
    "loss": "loss",
    "checkpoint_every": "checkpoint_every",
}
FIELD_TO_KEY = {v: k for k, v in KEY_TO_FIELD.items()}


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in TRUE_VALUES:
        return True
    if lowered in FALSE_VALUES:
        return False
    raise ValueError(f"not a boolean: {text!r}")


PARSERS: Dict[str, Callable[[str], Any]] = {
    "batch_size": int,
    "max_iterations": int,
    "lam": float,
    "alpha": float,
    "beta1": float,
    "beta2": float,
    "epsilon": float,
    "seed": int,
    "standardize": parse_bool,
    "loss": LossKind,
    "checkpoint_every": int,
}


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, LossKind):
        return value.value
    return str(value)


@dataclass
class TrainConfigDocument(BaseDTO):
    """Serializable wrapper around a TrainConfig."""
    config: TrainConfig

    def to_dict(self) -> Dict[str, Any]:
        return {FIELD_TO_KEY[f.name]: getattr(self.config, f.name) for f in fields(self.config)}

    def to_text(self) -> str:
        """Render as key=value lines in field order."""
        return "".join(f"{key}={_render(value)}\n" for key, value in self.to_dict().items())

    @classmethod
    def from_dict(
        cls,
        data: Mapping[str, Optional[str]],
        base: Optional[TrainConfig] = None,
    ) -> 'TrainConfigDocument':
        """
        Build a config from string values layered over base.

        Raises:
            ValidationError: On unknown keys, unparsable or invalid values
        """
        overrides: Dict[str, Any] = {}
        for key, raw in data.items():
            field_name = KEY_TO_FIELD.get(key.strip().lower())
            if field_name is None:
                raise ValidationError(f"Unknown training config key: {key}")
            if raw is None or not str(raw).strip():
                raise ValidationError(f"Missing value for training config key: {key}")
            try:
                overrides[field_name] = PARSERS[field_name](str(raw).strip())
            except ValueError as error:
                raise ValidationError(f"Invalid value for {key}: {raw!r}") from error

        try:
            config = (base or TrainConfig()).with_overrides(**overrides)
        except InvalidConfigError as error:
            raise ValidationError(str(error)) from error
        return cls(config=config)

    @classmethod
    def from_file(cls, path: str, base: Optional[TrainConfig] = None) -> 'TrainConfigDocument':
        """
        Load a key=value config file.

        Raises:
            OSError: If the file cannot be read
            ValidationError: If the content is invalid
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Training config file not found: {path}")
        return cls.from_dict(dotenv_values(path), base=base)
