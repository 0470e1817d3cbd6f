"""
Development configuration

Extends base configuration with development-specific settings.
"""

from milnet.config.base_config import BaseConfig


class DevelopmentConfig(BaseConfig):
    """
    Development environment configuration.

    Verbose logging, including the parsed arguments of every run.
    """

    DEBUG: bool = True
    TESTING: bool = False

    LOG_LEVEL: str = "DEBUG"
    LOG_RUN_ARGS: bool = True

    @classmethod
    def __repr__(cls) -> str:
        """String representation of configuration."""
        return "<DevelopmentConfig environment>"
