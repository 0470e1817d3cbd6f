"""
Testing configuration

Small, fast defaults for the test suite.
"""

from milnet.config.base_config import BaseConfig


class TestingConfig(BaseConfig):
    """Testing environment configuration."""

    __test__ = False

    DEBUG: bool = True
    TESTING: bool = True

    LOG_LEVEL: str = "WARNING"
    MILNET_JOBS: int = 1
    GRADCHECK_TRIALS: int = 10
    PROBE_BAGS: int = 16

    @classmethod
    def __repr__(cls) -> str:
        """String representation of configuration."""
        return "<TestingConfig environment>"
