"""
Base configuration class

Defines common configuration settings for all environments.
"""

import os


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes")


class BaseConfig:
    """
    Base configuration class.

    Contains settings common to all environments.
    Subclasses override for environment-specific settings.
    """

    # Application
    APP_NAME: str = "milnet"
    DEBUG: bool = False
    TESTING: bool = False

    # Execution
    MILNET_JOBS: int = int(os.getenv("MILNET_JOBS", "1"))

    # Experiment defaults
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))
    DEFAULT_EMBED_DIM: int = int(os.getenv("DEFAULT_EMBED_DIM", "8"))
    DEFAULT_LAMBDA: float = float(os.getenv("DEFAULT_LAMBDA", "1e-5"))
    CHECKPOINT_EVERY: int = int(os.getenv("CHECKPOINT_EVERY", "500"))
    GRADCHECK_TRIALS: int = int(os.getenv("GRADCHECK_TRIALS", "100"))
    PROBE_BAGS: int = int(os.getenv("PROBE_BAGS", "64"))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_RUN_ARGS: bool = _env_flag("LOG_RUN_ARGS", "false")

    @classmethod
    def get_config_dict(cls) -> dict:
        """
        Get configuration as dictionary.

        Returns:
            Dictionary of configuration values

        Examples:
            >>> config = BaseConfig.get_config_dict()
            >>> print(config['APP_NAME'])
            milnet
        """
        return {
            key: getattr(cls, key)
            for key in dir(cls)
            if key.isupper() and not key.startswith('_')
        }

    @classmethod
    def default_jobs(cls) -> int:
        """
        Worker count used when --jobs is not given.

        MILNET_JOBS is read at call time, so it can be changed after import.
        """
        value = os.getenv("MILNET_JOBS")
        if value is None:
            return cls.MILNET_JOBS
        try:
            return int(value)
        except ValueError:
            raise ValueError(f"MILNET_JOBS must be an integer, got '{value}'")

    @classmethod
    def validate(cls) -> None:
        """
        Validate configuration.

        Raises:
            ValueError: If configuration is invalid
        """
        if cls.MILNET_JOBS < 1:
            raise ValueError("MILNET_JOBS must be at least 1")

        if cls.DEFAULT_SEED < 0:
            raise ValueError("DEFAULT_SEED must be non-negative")

        if cls.DEFAULT_EMBED_DIM < 1:
            raise ValueError("DEFAULT_EMBED_DIM must be at least 1")

        if cls.DEFAULT_LAMBDA < 0:
            raise ValueError("DEFAULT_LAMBDA must be non-negative")

        if cls.CHECKPOINT_EVERY < 1:
            raise ValueError("CHECKPOINT_EVERY must be at least 1")

        if cls.GRADCHECK_TRIALS < 1:
            raise ValueError("GRADCHECK_TRIALS must be at least 1")

        if cls.PROBE_BAGS < 1:
            raise ValueError("PROBE_BAGS must be at least 1")

    @classmethod
    def __repr__(cls) -> str:
        """String representation of configuration."""
        return f"<{cls.__name__} environment>"
