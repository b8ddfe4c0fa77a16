"""
Acceptance suites at reduced size; the full Monte-Carlo run is marked slow
"""

import pytest

from app.verify import (
    SUITES,
    run_suites,
    suite_accuracy,
    suite_appendix,
    suite_cost,
    suite_determinism,
    suite_lambda,
    suite_multihop,
    suite_optimal_k,
    suite_pairwise,
    suite_termination,
)


def _failures(result):
    return [c for c in result.checks if not c.passed]


def test_termination_suite(default_profile):
    result = suite_termination(default_profile, seed=1, configs=20)
    assert len(result.checks) == 20
    assert _failures(result) == []


def test_cost_suite(default_profile):
    result = suite_cost(default_profile, seed=2, configs=40)
    assert _failures(result) == []


def test_optimal_k_suite(default_profile):
    assert _failures(suite_optimal_k(default_profile, seed=3, configs=10)) == []


def test_lambda_suite():
    result = suite_lambda()
    assert result.passed
    assert any(note.startswith("fact(3)") for note in result.notes)


def test_pairwise_suite(default_profile):
    assert _failures(suite_pairwise(default_profile, seed=4, configs=5)) == []


def test_multihop_suite(default_profile):
    assert _failures(suite_multihop(default_profile, seed=5, configs=10)) == []


def test_appendix_suite():
    result = suite_appendix()
    assert _failures(result) == []
    assert len(result.checks) == 5


def test_determinism_suite(default_profile):
    assert _failures(suite_determinism(default_profile, seed=6)) == []


def test_accuracy_suite_reduced(default_profile):
    """200 trials per grid point with tolerances widened to match"""
    result = suite_accuracy(default_profile, seed=7, trials=200)
    assert _failures(result) == []


@pytest.mark.slow
def test_accuracy_suite_full(default_profile):
    result = suite_accuracy(default_profile, seed=0, trials=10_000, jobs=4)
    assert _failures(result) == []


def test_run_suites_by_name(default_profile):
    results = run_suites(["lambda"], default_profile)
    assert [r.suite for r in results] == ["lambda"]
    assert set(SUITES) >= {"termination", "cost", "accuracy", "appendix", "determinism"}
