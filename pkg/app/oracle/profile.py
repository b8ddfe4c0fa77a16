"""
Oracle profiles: context window, accuracy decay and pricing constants
"""

import json
import logging
import sys
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigError
from app.utils.config import get_profile_dir

logger = logging.getLogger(__name__)


class OracleProfile(BaseModel):
    """Model-regularity constants of the base model M"""

    name: str = Field("custom", description="Profile name")
    description: str = Field("", description="Free-form notes, e.g. calibration")
    K: int = Field(..., ge=1, description="Context window in tokens")
    A0: float = Field(..., gt=0, le=1, description="Peak accuracy")
    rho: float = Field(..., gt=0, le=1, description="Context-rot decay factor per K tokens")
    c_in: float = Field(..., ge=0, description="Money per input token")
    c_out: float = Field(..., ge=0, description="Money per output token")
    n_out_bar: int = Field(64, ge=0, description="Expected output tokens per call")
    c_oplus: float = Field(0.0, ge=0, description="Money per composed element, neural ⊕")
    A_oplus: float = Field(1.0, gt=0, le=1, description="Preservation probability of neural ⊕")
    seed: int = Field(0, ge=0, description="Seed of the stochastic backend")


def call_cost(profile: OracleProfile, input_tokens: int, output_tokens: int) -> float:
    return profile.c_in * input_tokens + profile.c_out * output_tokens


def cost_of(profile: OracleProfile, n: int) -> float:
    """C(n) = c_in · n + c_out · n̄_out"""
    if n < 0:
        raise ValueError("token count must be non-negative")
    return call_cost(profile, n, profile.n_out_bar)


def accuracy_at(profile: OracleProfile, n: int) -> float:
    """A(n) = A0 · ρ^(n/K), clamped to (0, 1]; extrapolated past K."""
    if n < 0:
        raise ValueError("token count must be non-negative")
    value = profile.A0 * profile.rho ** (n / profile.K)
    return min(1.0, max(value, sys.float_info.min))


def composition_cost(profile: OracleProfile, k: int, deterministic: bool) -> float:
    """C⊕(k): zero for symbolic operators, c⊕ · k for neural ones."""
    return 0.0 if deterministic else profile.c_oplus * k


def composition_accuracy(profile: OracleProfile, deterministic: bool) -> float:
    return 1.0 if deterministic else profile.A_oplus


def resolve_profile_path(ref: Union[str, Path]) -> Path:
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        return path
    return get_profile_dir() / f"{ref}.json"


def load_profile(ref: Union[str, Path], seed: Optional[int] = None) -> OracleProfile:
    """
    Load a profile from a JSON file path or a bare profile name.

    Args:
        ref: path to a JSON file, or a name resolved in the profile directory
        seed: overrides the profile's stochastic seed when given

    Returns:
        The validated profile
    """
    path = resolve_profile_path(ref)
    if not path.exists():
        raise ConfigError(f"profile not found: {ref}", {"path": str(path)})
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        profile = OracleProfile.model_validate(data)
    except (json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"invalid profile {path}: {e}", {"path": str(path)}) from e
    if seed is not None:
        profile = profile.model_copy(update={"seed": seed})
    logger.debug(f"Loaded profile '{profile.name}' from {path}")
    return profile
