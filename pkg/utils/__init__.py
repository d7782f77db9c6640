"""Utility functions for sir-exact."""

from .helpers import format_float, load_config, read_yaml_mapping, resolve_thread_count
from .logger import get_logger, setup_logging

__all__ = [
    "format_float",
    "get_logger",
    "load_config",
    "read_yaml_mapping",
    "resolve_thread_count",
    "setup_logging",
]
