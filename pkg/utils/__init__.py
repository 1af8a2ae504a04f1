"""
Utility modules - configuration, output files and the shared error hierarchy.
"""

from .config import QMCConfig, get_config, set_config
from .files import ensure_parent_dir, write_text_atomic
from .errors import (
    CertificateInvalidError,
    InvalidBaseError,
    InvalidInputError,
    OutputWriteError,
    QMCError,
    ResourceCapError,
)

__all__ = [
    "QMCConfig",
    "get_config",
    "set_config",
    "ensure_parent_dir",
    "write_text_atomic",
    "CertificateInvalidError",
    "InvalidBaseError",
    "InvalidInputError",
    "OutputWriteError",
    "QMCError",
    "ResourceCapError",
]
