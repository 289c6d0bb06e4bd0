"""
Core modules: logging, configuration, errors and artifacts
"""

from .logger import SystemLogger, get_logger, init_logger
from .config import load_config, validate_config, merge_config, section, DEFAULT_CONFIG
from .artifacts import ArtifactManager
from . import errors

__all__ = [
    'SystemLogger', 'get_logger', 'init_logger',
    'load_config', 'validate_config', 'merge_config', 'section', 'DEFAULT_CONFIG',
    'ArtifactManager', 'errors'
]
