"""
Configuration settings loader

Picks the configuration class for the current environment (MILNET_ENV) and
loads .env files.
"""

import os
from typing import Dict, Optional, Type

from dotenv import load_dotenv

from milnet.config.base_config import BaseConfig
from milnet.config.development import DevelopmentConfig
from milnet.config.production import ProductionConfig
from milnet.config.testing import TestingConfig


ENV_VARIABLE = 'MILNET_ENV'
DEFAULT_ENV = 'development'

CONFIG_MAP: Dict[str, Type[BaseConfig]] = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
}

# Short names accepted in MILNET_ENV
ENV_ALIASES = {'dev': 'development', 'prod': 'production', 'test': 'testing'}


def resolve_environment(env: Optional[str] = None) -> str:
    """
    Canonical environment name.

    Falls back to MILNET_ENV, then to 'development'.

    Raises:
        ValueError: If the name is unknown

    Examples:
        >>> resolve_environment('Prod')
        'production'
    """
    name = (env if env is not None else os.getenv(ENV_VARIABLE, DEFAULT_ENV)).strip().lower()
    name = ENV_ALIASES.get(name, name)
    if name not in CONFIG_MAP:
        raise ValueError(
            f"Invalid environment: {name}. "
            f"Must be one of: {', '.join(CONFIG_MAP)}"
        )
    return name


def get_config_class(env: Optional[str] = None) -> Type[BaseConfig]:
    """
    Configuration class for an environment (MILNET_ENV when env is None).

    Raises:
        ValueError: If environment is invalid
    """
    return CONFIG_MAP[resolve_environment(env)]


def get_settings(env: Optional[str] = None) -> Type[BaseConfig]:
    """
    Configuration class after validate() has passed.

    Raises:
        ValueError: If environment is invalid or configuration fails validation
    """
    config_class = get_config_class(env)
    config_class.validate()
    return config_class


def load_env_file(env_file: str = '.env') -> bool:
    """
    Load environment variables from a .env file.

    Variables already set in the environment win.

    Returns:
        True if the file existed and held at least one variable
    """
    if not os.path.isfile(env_file):
        return False
    return load_dotenv(env_file, override=False)
