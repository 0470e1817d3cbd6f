"""Environment-selected configuration."""

from milnet.config.settings import get_config_class, get_settings, load_env_file

__all__ = ["get_config_class", "get_settings", "load_env_file"]
