"""
Utilities package initialization
"""

from app.utils.config import (
    get_default_jobs,
    get_log_level,
    get_profile_dir,
    get_remote_token,
    get_remote_url,
    get_runtime_config,
    is_debug,
    print_runtime_status,
    validate_config,
)

__all__ = [
    "get_default_jobs",
    "get_log_level",
    "get_profile_dir",
    "get_remote_token",
    "get_remote_url",
    "get_runtime_config",
    "is_debug",
    "print_runtime_status",
    "validate_config",
]
