import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Setup logger
logger = logging.getLogger(__name__)

# Ensure environment variables are loaded
load_dotenv()

DEFAULT_REMOTE_URL = "http://127.0.0.1:8000/generate"


def is_debug() -> bool:
    """
    Check if debug logging is requested.

    Returns:
        True if DEBUG is set to 'true', False otherwise
    """
    return os.getenv("DEBUG", "false").lower() == "true"


def get_log_level() -> int:
    if is_debug():
        return logging.DEBUG
    return getattr(logging, os.getenv("LOG_LEVEL", "INFO").upper(), logging.INFO)


def get_profile_dir() -> Path:
    """Directory searched for profiles given by bare name"""
    return Path(os.getenv("LAMBDA_RLM_PROFILE_DIR", "./profiles"))


def get_remote_url() -> str:
    return os.getenv("LAMBDA_RLM_REMOTE_URL", DEFAULT_REMOTE_URL)


def get_remote_token() -> Optional[str]:
    """
    Get the bearer token for the remote oracle endpoint.

    Returns:
        Token if set, None otherwise
    """
    return os.getenv("LAMBDA_RLM_REMOTE_TOKEN")


def get_default_jobs() -> int:
    """Worker count for simulation suites; defaults to the logical core count."""
    raw = os.getenv("LAMBDA_RLM_JOBS")
    if raw and raw.isdigit() and int(raw) > 0:
        return int(raw)
    return os.cpu_count() or 1


def get_runtime_config() -> Dict[str, Any]:
    """
    Get runtime configuration status.

    Returns:
        Dictionary with configuration values (the token is reported as set/unset only)
    """
    return {
        "profile_dir": str(get_profile_dir()),
        "data_dir": os.getenv("DATA_DIR", "./data"),
        "remote_url": get_remote_url(),
        "remote_token_set": bool(get_remote_token()),
        "debug": is_debug(),
        "jobs": get_default_jobs(),
    }


def validate_config() -> tuple[bool, list[str]]:
    """
    Validate configuration and return status with any issues.

    Returns:
        Tuple of (is_valid, list_of_issues)
    """
    issues = []

    if not get_profile_dir().is_dir():
        issues.append(f"profile directory {get_profile_dir()} does not exist")

    raw_jobs = os.getenv("LAMBDA_RLM_JOBS")
    if raw_jobs and not (raw_jobs.isdigit() and int(raw_jobs) > 0):
        issues.append(f"LAMBDA_RLM_JOBS={raw_jobs!r} is not a positive integer")

    return len(issues) == 0, issues


def print_runtime_status() -> None:
    """
    Log runtime configuration status.
    Useful for startup logging.
    """
    config = get_runtime_config()

    logger.info("=" * 60)
    logger.info("λ-RLM runtime")
    logger.info(f"  Profiles: {config['profile_dir']}")
    logger.info(f"  Data dir: {config['data_dir']}")
    logger.info(f"  Remote:   {config['remote_url']}")
    logger.info(f"  Token:    {'✓ Set' if config['remote_token_set'] else '✗ Not Set'}")
    logger.info(f"  Jobs:     {config['jobs']}")
    logger.info("=" * 60)
