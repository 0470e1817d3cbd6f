"""
Production configuration

Extends base configuration with settings for long batch experiments.
"""

import logging
import os

from milnet.config.base_config import BaseConfig


class ProductionConfig(BaseConfig):
    """
    Production environment configuration.

    Minimal logging and strict validation.
    """

    DEBUG: bool = False
    TESTING: bool = False

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_RUN_ARGS: bool = False

    @classmethod
    def validate(cls) -> None:
        """
        Validate production configuration.

        Production has strict validation rules.
        """
        super().validate()

        if cls.DEBUG:
            raise ValueError("DEBUG must be False in production")

        if cls.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown LOG_LEVEL: {cls.LOG_LEVEL}")

        if cls.LOG_LEVEL.upper() == "DEBUG":
            logger = logging.getLogger(__name__)
            logger.warning(
                "DEBUG logging in production records every training checkpoint. "
                "Set LOG_LEVEL=INFO for long experiments."
            )

    @classmethod
    def __repr__(cls) -> str:
        """String representation of configuration."""
        return "<ProductionConfig environment>"
