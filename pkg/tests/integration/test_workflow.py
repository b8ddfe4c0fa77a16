"""
Integration tests for the run pipeline graph
"""

import math

import pytest

from app.agents.reporter import score_node
from app.errors import InfeasibleAccuracy
from app.graph import create_graph, route_execution, run_pipeline
from app.oracle import OracleProfile, StochasticOracle, SymbolicOracle
from app.planner import build_plan
from app.schema import ExecTrace, RunConfig, TaskType
from app.taskgen import gen_aggregate, gen_multihop, gen_needle, gen_pairwise


def test_graph_structure():
    """Test that the graph has every pipeline node"""
    graph = create_graph()
    assert {
        "detect",
        "plan",
        "estimate",
        "execute_phi",
        "execute_pairwise",
        "execute_multihop",
        "score",
    } <= set(graph.nodes)


def test_route_execution(default_profile):
    for task, node in [
        (TaskType.PAIRWISE, "execute_pairwise"),
        (TaskType.MULTI_HOP, "execute_multihop"),
        (TaskType.AGGREGATE, "execute_phi"),
        (TaskType.SEARCH, "execute_phi"),
    ]:
        plan = build_plan(task, 100_000, default_profile)
        assert route_execution({"plan": plan}) == node


def test_appendix_run(appendix_profile):
    """131K-token aggregate: detection plus five leaves, estimated ≈ $0.17"""
    instance = gen_aggregate(131_000, seed=0)
    config = RunConfig(task="aggregate", tokens=131_000, profile="appendix-a")
    state = run_pipeline(config, instance, appendix_profile, SymbolicOracle(appendix_profile))

    plan, trace = state["plan"], state["trace"]
    assert state["task"] == TaskType.AGGREGATE
    assert (plan.k_star, plan.tau_star, plan.depth) == (5, 26_200, 1)
    assert state["estimate"].predicted_calls == 6
    assert trace.oracle_calls == 6
    assert [c.kind for c in trace.calls] == ["detect"] + ["leaf"] * 5
    assert abs(state["estimate"].total - 0.17) <= 0.005
    assert state["score"] == 1.0


def test_small_prompt_runs_direct(default_profile):
    instance = gen_aggregate(2_000, seed=1)
    config = RunConfig(task="aggregate", tokens=2_000)
    state = run_pipeline(config, instance, default_profile, SymbolicOracle(default_profile))
    trace = state["trace"]
    assert [c.kind for c in trace.calls] == ["detect", "direct"]
    assert state["score"] == 1.0
    assert state["predicted_accuracy"] > 0.9


def test_search_run(default_profile):
    instance = gen_needle(60_000, seed=4)
    config = RunConfig(task="needle", tokens=60_000)
    state = run_pipeline(config, instance, default_profile, SymbolicOracle(default_profile))
    assert state["task"] == TaskType.SEARCH
    assert state["trace"].oracle_calls <= state["estimate"].predicted_calls
    assert state["score"] == 1.0


def test_pairwise_run(default_profile):
    instance = gen_pairwise(300, seed=2)
    config = RunConfig(task="pairwise", tokens=instance.n)
    small = default_profile.model_copy(update={"K": 1024})
    state = run_pipeline(config, instance, small, SymbolicOracle(small))
    trace = state["trace"]
    assert trace.oracle_calls == -(-instance.n // state["plan"].tau_star) + 1
    assert [list(p) for p in state["answer"]] == instance.truth
    assert state["score"] == 1.0


def test_multihop_run(default_profile):
    instance = gen_multihop(8, seed=6)
    config = RunConfig(task="multihop", tokens=instance.n)
    state = run_pipeline(config, instance, default_profile, SymbolicOracle(default_profile))
    trace = state["trace"]
    assert state["task"] == TaskType.MULTI_HOP
    assert trace.oracle_calls == 2 + 2
    assert state["answer"] == instance.truth


def test_stochastic_run_is_reproducible(default_profile):
    instance = gen_aggregate(40_000, seed=3)
    config = RunConfig(task="aggregate", tokens=40_000, backend="stochastic")
    first = run_pipeline(config, instance, default_profile, StochasticOracle(default_profile))
    second = run_pipeline(config, instance, default_profile, StochasticOracle(default_profile))
    assert first["trace"] == second["trace"]


def test_misdetected_task_is_not_scored(default_profile):
    instance = gen_aggregate(2_000, seed=1)
    plan = build_plan(TaskType.CLASSIFY, 2_000, default_profile)
    state = {"instance": instance, "plan": plan, "trace": ExecTrace(), "answer": []}
    assert score_node(state) == {"score": None}


def _small_window(K: int) -> OracleProfile:
    return OracleProfile(
        name="small", K=K, A0=1.0, rho=1.0, c_in=1e-4, c_out=1e-3, n_out_bar=4, c_oplus=1e-3
    )


def test_estimate_matches_trace_with_empty_leaves():
    """k* = 30, τ* = 288, d = 2 over 8658 tokens: 31 of 900 leaves are empty"""
    profile = _small_window(2_000)
    instance = gen_aggregate(8_658, seed=3)
    config = RunConfig(task="aggregate", tokens=instance.n)
    state = run_pipeline(config, instance, profile, SymbolicOracle(profile))

    plan, trace, estimate = state["plan"], state["trace"], state["estimate"]
    assert (plan.k_star, plan.tau_star, plan.depth) == (30, 288, 2)
    assert trace.empty_leaves == 31
    assert trace.oracle_calls == estimate.predicted_calls == 870
    assert math.isclose(trace.accumulated_cost, estimate.total, rel_tol=1e-9)
    assert state["score"] == 1.0


def test_small_window_run_stays_inside_the_window():
    profile = _small_window(300)
    instance = gen_aggregate(2_000, seed=1)
    config = RunConfig(task="aggregate", tokens=instance.n)
    state = run_pipeline(config, instance, profile, SymbolicOracle(profile))

    trace = state["trace"]
    detect = trace.calls_of("detect")[0]
    assert detect.input_tokens == profile.K
    assert all(c.input_tokens <= profile.K for c in trace.calls)
    assert trace.oracle_calls == state["estimate"].predicted_calls
    assert state["score"] == 1.0


def test_strict_run_rejects_unreachable_target(appendix_profile):
    instance = gen_aggregate(131_000, seed=0)
    config = RunConfig(task="aggregate", tokens=131_000, alpha=0.99, strict=True)
    with pytest.raises(InfeasibleAccuracy):
        run_pipeline(config, instance, appendix_profile, SymbolicOracle(appendix_profile))
