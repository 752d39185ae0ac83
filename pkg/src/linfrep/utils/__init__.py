"""
Utility classes and functions: logging setup, progress, rationals, suite config.
"""

from .common import ProgressLogger, file_digest, format_rational, parse_rational, setup_logging
from .suite_config import SuiteConfigManager

__all__ = [
    'ProgressLogger',
    'SuiteConfigManager',
    'file_digest',
    'format_rational',
    'parse_rational',
    'setup_logging',
]
