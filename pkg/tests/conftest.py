"""
Shared fixtures: profiles resolve from the repository, data goes to a temp dir
"""

import os
from pathlib import Path

import pytest

from app.oracle import OracleProfile, load_profile
from app.schema import Plan, Strategy, TaskType

ROOT = Path(__file__).resolve().parents[1]

# bare profile names resolve from the repository, whatever the working directory
os.environ.setdefault("LAMBDA_RLM_PROFILE_DIR", str(ROOT / "profiles"))


@pytest.fixture(autouse=True)
def data_dir(tmp_path, monkeypatch):
    path = tmp_path / "data"
    monkeypatch.setenv("DATA_DIR", str(path))
    return path


@pytest.fixture
def tiny_profile() -> OracleProfile:
    """64-token window, always correct, round prices."""
    return OracleProfile(
        name="tiny",
        K=64,
        A0=1.0,
        rho=1.0,
        c_in=1e-3,
        c_out=2e-3,
        n_out_bar=4,
        c_oplus=1e-3,
        A_oplus=1.0,
    )


@pytest.fixture
def default_profile() -> OracleProfile:
    return load_profile("default")


@pytest.fixture
def appendix_profile() -> OracleProfile:
    return load_profile("appendix-a")


def fixed_plan(task: TaskType, n: int, k: int, tau: int) -> Plan:
    """Plan with hand-picked (k, τ), bypassing the planner's parameter choice."""
    from app.planner import lookup_plan
    from app.runtime.executor import depth_for

    compose, pipeline = lookup_plan(task)
    return Plan(
        task=task,
        compose=compose,
        pipeline=pipeline,
        n=n,
        k_star=k,
        tau_star=tau,
        depth=depth_for(n, k, tau),
        strategy=Strategy.FIXED,
    )
