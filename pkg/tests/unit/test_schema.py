"""
Unit tests for the pipeline state, models and error objects
"""

import pytest
from pydantic import ValidationError

from app.errors import FuelExhausted, LambdaRLMError, OracleTimeout
from app.lambda_core.reduction import ReductionTrace
from app.planner import lookup_plan
from app.schema import (
    Check,
    CompositionOp,
    ExecTrace,
    Plan,
    RunConfig,
    SuiteResult,
    TaskType,
    TraceCall,
    TraceEvent,
)
from app.state import RunState


def test_run_state_structure():
    """RunState carries the inputs and every node's output"""
    required_keys = {
        "config",
        "instance",
        "profile",
        "oracle",
        "doc",
        "query",
        "recorder",
        "task",
        "plan",
        "estimate",
        "predicted_accuracy",
        "answer",
        "trace",
        "score",
    }
    assert set(RunState.__annotations__.keys()) == required_keys


def test_run_config_validation():
    assert RunConfig(task="aggregate", tokens=1_000).backend == "symbolic"
    assert RunConfig(instance="data/x.json").instance == "data/x.json"
    with pytest.raises(ValidationError):
        RunConfig(task="aggregate")
    assert RunConfig(task="aggregate", tokens=1_000, backend="remote").url is None
    assert not RunConfig(task="aggregate", tokens=1_000).strict
    with pytest.raises(ValidationError):
        RunConfig(task="aggregate", tokens=1_000, strategy="fixed")
    with pytest.raises(ValidationError):
        RunConfig(task="aggregate", tokens=1_000, backend="openai")


def test_plan_properties():
    compose, pipeline = lookup_plan(TaskType.SEARCH)
    plan = Plan(task=TaskType.SEARCH, compose=compose, pipeline=pipeline, n=100, k_star=3,
                tau_star=20, depth=2)
    assert plan.leaf_calls == 9
    assert plan.prunes
    compose, pipeline = lookup_plan(TaskType.AGGREGATE)
    assert not Plan(task=TaskType.AGGREGATE, compose=compose, pipeline=pipeline, n=100,
                    k_star=3, tau_star=20, depth=2).prunes


def test_composition_determinism():
    assert CompositionOp.MERGE_COUNTS.deterministic
    assert not CompositionOp.NEURAL_SYNTH.deterministic


def test_trace_derived_fields():
    calls = [
        TraceCall(index=i, kind="leaf", depth=d, input_tokens=10, cost=0.1, backend="symbolic")
        for i, d in enumerate([1, 2, 2])
    ]
    events = [TraceEvent(index=0, layer="symbolic", op="split"),
              TraceEvent(index=1, layer="planning", op="fix")]
    trace = ExecTrace(calls=calls, events=events)
    assert trace.oracle_calls == 3
    assert trace.max_depth == 2
    assert trace.accumulated_cost == pytest.approx(0.3)
    assert trace.symbolic_ops == 1
    dumped = trace.model_dump()
    assert dumped["oracle_calls"] == 3
    assert ExecTrace().max_depth == 0


def test_suite_result_summary():
    result = SuiteResult(suite="demo", checks=[Check(name="a", passed=True),
                                               Check(name="b", passed=False)])
    assert not result.passed
    assert result.summary == "1/2"
    assert SuiteResult(suite="empty").passed


def test_error_objects():
    error = OracleTimeout("unreachable", call_index=4, url="http://x")
    payload = error.to_dict()
    assert payload["type"] == "OracleTimeout"
    assert payload["detail"] == {"call_index": 4, "url": "http://x"}
    assert isinstance(error, LambdaRLMError)

    trace = ReductionTrace(fuel_used=12)
    assert FuelExhausted(trace).detail == {"fuel_used": 12}
