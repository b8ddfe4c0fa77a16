"""
Answer oracles: profiles, cost and accuracy model, backends
"""

from typing import Optional

from app.errors import ConfigError
from app.oracle.base import Oracle, OracleAnswer, OracleCallRecord
from app.oracle.profile import (
    OracleProfile,
    accuracy_at,
    call_cost,
    composition_accuracy,
    composition_cost,
    cost_of,
    load_profile,
)
from app.oracle.remote import RemoteOracle, remote_call
from app.oracle.stochastic import StochasticOracle
from app.oracle.symbolic import SymbolicOracle
from app.utils.config import get_remote_url

BACKENDS = ("symbolic", "stochastic", "remote")


def make_oracle(backend: str, profile: OracleProfile, url: Optional[str] = None) -> Oracle:
    """Build a backend by name; the remote URL defaults to LAMBDA_RLM_REMOTE_URL."""
    if backend == "symbolic":
        return SymbolicOracle(profile)
    if backend == "stochastic":
        return StochasticOracle(profile)
    if backend == "remote":
        url = url or get_remote_url()
        if not url:
            raise ConfigError("backend=remote requires a URL")
        return RemoteOracle(profile, url)
    raise ConfigError(f"unknown backend {backend!r}", {"choices": list(BACKENDS)})


__all__ = [
    "BACKENDS",
    "Oracle",
    "OracleAnswer",
    "OracleCallRecord",
    "OracleProfile",
    "RemoteOracle",
    "StochasticOracle",
    "SymbolicOracle",
    "accuracy_at",
    "call_cost",
    "composition_accuracy",
    "composition_cost",
    "cost_of",
    "load_profile",
    "make_oracle",
    "remote_call",
]
