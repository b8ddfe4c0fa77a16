"""
Unit tests for the cost and accuracy models and the Monte-Carlo drivers
"""

import math

import pytest

from app.analysis import (
    accuracy_lower_bound,
    cost_closed_form,
    cost_recurrence,
    depth_path_bound,
    power_law_bound,
    rlm_baseline_stub,
    run_ablations,
    scaling_exponent,
    simulate_scaling,
    sweep_optimal_k,
    interior_k_sketch,
    wilson_interval,
)
from app.analysis.simulation import per_query_accuracy, trial_seed
from app.oracle import SymbolicOracle, accuracy_at, cost_of, load_profile
from app.planner import build_plan
from app.runtime.combinators import chunk_sizes
from app.runtime.document import Document
from app.runtime.executor import execute_phi
from app.runtime.prompts import leaf_overhead
from app.schema import ExecTrace, TaskType, TraceCall
from tests.conftest import fixed_plan


def _call(kind: str, tokens: int, correct: bool) -> TraceCall:
    return TraceCall(
        index=0, kind=kind, depth=1, input_tokens=tokens, chunk_tokens=tokens,
        cost=0.0, backend="stochastic", was_correct=correct,
    )


def test_chunk_sizes_follow_split():
    assert chunk_sizes(10, 3) == [4, 4, 2]
    assert chunk_sizes(4, 3) == [2, 2, 0]


@pytest.mark.parametrize("n, k, tau", [(1_000, 2, 50), (997, 3, 17), (4, 3, 2), (5_000, 7, 40)])
def test_recurrence_equals_measured_cost(default_profile, n, k, tau):
    """The executor's accumulated cost is the recurrence on real chunk sizes"""
    doc = Document.of(["cat:loc"] * n)
    plan = fixed_plan(TaskType.AGGREGATE, n, k, tau)
    _, trace = execute_phi(doc, plan, SymbolicOracle(default_profile), prune=False)
    overhead = leaf_overhead(TaskType.AGGREGATE)
    assert trace.accumulated_cost == cost_recurrence(n, k, tau, default_profile, overhead=overhead)
    assert trace.accumulated_cost <= cost_closed_form(n, k, tau, default_profile, overhead=overhead)


def test_closed_form_counts_composition(appendix_profile):
    symbolic = cost_closed_form(100_000, 4, 1_000, appendix_profile)
    neural = cost_closed_form(100_000, 4, 1_000, appendix_profile, deterministic=False)
    nodes = (100_000 * 4 - 1_000) / (1_000 * 3)
    assert neural - symbolic == pytest.approx(appendix_profile.c_oplus * 4 * nodes)


def test_recurrence_rejects_unary_split(default_profile):
    with pytest.raises(ValueError):
        cost_recurrence(100, 1, 10, default_profile)


def test_accuracy_bounds(appendix_profile):
    a = accuracy_at(appendix_profile, 26_200)
    assert accuracy_lower_bound(20_000, 5, 26_200, 0, appendix_profile) == a
    assert accuracy_lower_bound(131_000, 5, 26_200, 1, appendix_profile) == pytest.approx(a**25)


def test_power_law_forms_agree(appendix_profile):
    """(n/τ)^(log_k A) and A^(log_k(n/τ)) are the same number"""
    for n, k, tau, d in [(131_000, 5, 26_200, 1), (10**6, 2, 8_000, 7), (50_000, 3, 1_000, 4)]:
        assert math.isclose(
            power_law_bound(n, k, tau, d, appendix_profile),
            depth_path_bound(n, k, tau, d, appendix_profile),
            rel_tol=1e-9,
        )


def test_scaling_exponent(appendix_profile):
    assert scaling_exponent(2, 26_200, appendix_profile) > 0
    perfect = appendix_profile.model_copy(update={"A0": 1.0, "rho": 1.0})
    assert scaling_exponent(2, 26_200, perfect) == pytest.approx(0.0)


def test_sweep_prefers_binary_splits(appendix_profile):
    sweep = sweep_optimal_k(100 * 26_200, 26_200, appendix_profile, k_max=16)
    assert sweep.argmin == 2
    assert [k for k, _ in sweep.table] == list(range(2, 17))
    assert sweep.sketch.interior == 2
    assert len(sweep.sketch_table) == 15


def test_sketch_coefficients(appendix_profile):
    sketch = interior_k_sketch(262_000, 26_200, appendix_profile)
    assert sketch.alpha == pytest.approx(10 * cost_of(appendix_profile, 26_200))
    assert sketch.beta == pytest.approx(appendix_profile.c_oplus * 10)
    assert sketch.gamma == appendix_profile.c_oplus


def test_rlm_baseline_is_a_model(appendix_profile):
    row = rlm_baseline_stub(131_000, 8, appendix_profile)
    assert row.calls == 8
    assert row.cost == pytest.approx(8 * cost_of(appendix_profile, 32_000))
    assert row.label == "model, not measurement"
    with pytest.raises(ValueError):
        rlm_baseline_stub(131_000, 0, appendix_profile)


def test_wilson_interval():
    low, high = wilson_interval(0.5, 100)
    assert low < 0.5 < high
    assert 0.5 - low == pytest.approx(high - 0.5)
    low, high = wilson_interval(1.0, 10)
    assert high == pytest.approx(1.0)
    assert low < 1.0
    with pytest.raises(ValueError):
        wilson_interval(0.5, 0)


def test_trial_seed_is_stable():
    assert trial_seed(0, 8_000, 3) == trial_seed(0, 8_000, 3)
    assert trial_seed(0, 8_000, 3) != trial_seed(0, 8_000, 4)


def test_per_query_accuracy_weights_by_tokens():
    trace = ExecTrace(calls=[_call("leaf", 300, True), _call("leaf", 100, False)])
    assert per_query_accuracy(trace) == pytest.approx(0.75)
    trace = ExecTrace(calls=[_call("direct", 50, True)])
    assert per_query_accuracy(trace) == 1.0
    # a wrong neural composition spoils the whole query
    trace = ExecTrace(calls=[_call("leaf", 300, True), _call("compose", 10, False)])
    assert per_query_accuracy(trace) == 0.0


def test_simulate_scaling_rows():
    profile = load_profile("scaling")
    rows = simulate_scaling(TaskType.AGGREGATE, [20_000], 4, profile, seed=1)
    assert [r.method for r in rows] == ["direct", "lambda_rlm"]
    assert all(r.n == 20_000 and r.trials == 4 for r in rows)
    assert rows[0].mean_calls == 1.0
    plan = build_plan(
        TaskType.AGGREGATE, 20_000, profile, reserve=leaf_overhead(TaskType.AGGREGATE)
    )
    assert rows[1].mean_calls == float(plan.k_star**plan.depth)
    assert rows[0].predicted == pytest.approx(accuracy_at(profile, 20_002))
    for row in rows:
        assert 0.0 <= row.ci_low <= row.empirical_accuracy + 1e-9
        assert row.empirical_accuracy - 1e-9 <= row.ci_high <= 1.0


def test_simulation_does_not_depend_on_worker_count():
    profile = load_profile("scaling")
    serial = simulate_scaling(TaskType.AGGREGATE, [12_000], 6, profile, seed=2, jobs=1)
    parallel = simulate_scaling(TaskType.AGGREGATE, [12_000], 6, profile, seed=2, jobs=2)
    assert serial == parallel


def test_truncated_direct_baseline():
    profile = load_profile("scaling")
    rows = simulate_scaling(TaskType.AGGREGATE, [20_000], 3, profile, truncate=True)
    direct = rows[0]
    assert direct.predicted == pytest.approx(
        accuracy_at(profile, profile.K) * (profile.K - 2) / 20_000
    )


def test_ablation_variants():
    rows = run_ablations(12_000, 2, load_profile("scaling"), seed=0)
    assert [r.variant for r in rows] == [
        "full",
        "random_k",
        "fixed_task=classify",
        "neural_compose",
        "search_full",
        "no_prefilter",
    ]
    by_name = {r.variant: r for r in rows}
    assert by_name["neural_compose"].mean_calls > by_name["full"].mean_calls
    assert by_name["no_prefilter"].mean_calls >= by_name["search_full"].mean_calls
