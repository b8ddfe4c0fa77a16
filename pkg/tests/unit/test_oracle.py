"""
Unit tests for profiles and oracle backends
"""

import httpx
import numpy as np
import pytest

from app.errors import ConfigError, ContextOverflow, MalformedResponse, OracleHttpError, OracleTimeout
from app.oracle import (
    RemoteOracle,
    StochasticOracle,
    SymbolicOracle,
    accuracy_at,
    composition_accuracy,
    composition_cost,
    cost_of,
    load_profile,
    make_oracle,
)
from app.oracle.stochastic import corrupt
from app.oracle.symbolic import KIND_COUNTS, KIND_DETECT, KIND_FACTS, KIND_LABELS, KIND_VALUE
from app.runtime.document import Document
from app.runtime.prompts import detection_prompt, leaf_prompt
from app.schema import TaskType

URL = "http://oracle.test/generate"


def test_load_profile_by_name(appendix_profile):
    assert appendix_profile.name == "appendix-a"
    assert appendix_profile.K == 32_000
    assert "32K-window" in appendix_profile.description
    assert "131K" in appendix_profile.description


def test_load_profile_seed_override():
    assert load_profile("default", seed=7).seed == 7


def test_load_profile_errors(tmp_path):
    """Missing and malformed profiles are configuration errors"""
    with pytest.raises(ConfigError):
        load_profile("no-such-profile")
    bad = tmp_path / "bad.json"
    bad.write_text('{"K": 0}', encoding="utf-8")
    with pytest.raises(ConfigError):
        load_profile(bad)


def test_cost_and_accuracy_model(appendix_profile):
    """C(n) = c_in·n + c_out·n̄_out and A(n) = A0·ρ^(n/K)"""
    assert cost_of(appendix_profile, 26_200) == pytest.approx(0.030)
    assert accuracy_at(appendix_profile, 0) == pytest.approx(0.95)
    assert accuracy_at(appendix_profile, 32_000) == pytest.approx(0.855)
    # extrapolated past the window, still positive
    assert 0 < accuracy_at(appendix_profile, 10**7) < accuracy_at(appendix_profile, 32_000)


def test_composition_model(appendix_profile):
    assert composition_cost(appendix_profile, 5, deterministic=True) == 0.0
    assert composition_cost(appendix_profile, 5, deterministic=False) == pytest.approx(0.0125)
    assert composition_accuracy(appendix_profile, True) == 1.0
    assert composition_accuracy(appendix_profile, False) == 0.99


def test_window_is_enforced(tiny_profile):
    oracle = SymbolicOracle(tiny_profile)
    long = Document.of(["x"] * 65)
    with pytest.raises(ContextOverflow) as excinfo:
        oracle.call(long, 3)
    assert excinfo.value.call_index == 3
    # the direct baseline may extrapolate past K
    _, record = oracle.call(long, 3, enforce_window=False)
    assert record.input_tokens == 65


def test_call_record_prices_input_and_output(tiny_profile):
    oracle = SymbolicOracle(tiny_profile)
    prompt = leaf_prompt(Document.from_text("cat:loc x"), TaskType.AGGREGATE)
    answer, record = oracle.call(prompt, 0)
    assert answer.text == "loc=1"
    assert record.input_tokens == 4
    assert record.output_tokens == 4
    assert record.cost == pytest.approx(4e-3 + 8e-3)


def test_symbolic_detection(tiny_profile):
    oracle = SymbolicOracle(tiny_profile)
    preview = Document.from_text("Count the questions in each category .")
    answer, _ = oracle.call(detection_prompt(preview, 131_000), 0)
    assert answer.text == "aggregate"


def test_symbolic_leaf_answers(tiny_profile):
    oracle = SymbolicOracle(tiny_profile)
    query = Document.from_text("What is key-0001 ?")
    chunk = Document.from_text("lorem key-0002=111111 key-0001=123456 ipsum")
    answer, _ = oracle.call(leaf_prompt(chunk, TaskType.SEARCH, query), 0)
    assert answer.text == "123456"

    chunk = Document.from_text("item-3:red lorem item-1:blue")
    answer, _ = oracle.call(leaf_prompt(chunk, TaskType.CLASSIFY), 1)
    assert answer.text == "3\tred\n1\tblue"


def test_stochastic_is_a_function_of_seed_and_index(default_profile):
    oracle = StochasticOracle(default_profile)
    prompt = leaf_prompt(Document.from_text("cat:loc cat:num cat:loc"), TaskType.AGGREGATE)
    first = [oracle.call(prompt, i)[0].text for i in range(20)]
    again = [oracle.call(prompt, i)[0].text for i in range(20)]
    assert first == again


def test_stochastic_extremes(tiny_profile):
    """A ≡ 1 always answers correctly; A ≈ 0 always corrupts"""
    prompt = leaf_prompt(Document.from_text("cat:loc cat:loc"), TaskType.AGGREGATE)
    perfect = StochasticOracle(tiny_profile)
    answer, record = perfect.call(prompt, 0)
    assert answer.text == "loc=2"
    assert record.was_correct is True

    broken = StochasticOracle(tiny_profile.model_copy(update={"A0": 1e-12}))
    for i in range(10):
        answer, record = broken.call(prompt, i)
        assert record.was_correct is False
        assert answer.text != "loc=2"


@pytest.mark.parametrize(
    "text, kind",
    [
        ("aggregate", KIND_DETECT),
        ("123456", KIND_VALUE),
        ("none", KIND_VALUE),
        ("loc=2 num=1", KIND_COUNTS),
        ("", KIND_COUNTS),
        ("1\tred\n2\tblue", KIND_LABELS),
        ("1\tred", KIND_LABELS),
        ("employer ent-0001 org-0002", KIND_FACTS),
        ("note:0001 note:0002", "text"),
    ],
)
def test_corruption_always_changes_the_answer(text, kind):
    rng = np.random.default_rng(0)
    assert corrupt(text, kind, rng) != text


def _remote(handler, profile, **kwargs) -> RemoteOracle:
    client = httpx.Client(transport=httpx.MockTransport(handler))
    return RemoteOracle(profile, URL, client=client, **kwargs)


def test_remote_protocol(default_profile):
    """POST {prompt, max_tokens} with a bearer token; output length is measured"""
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["auth"] = request.headers.get("authorization")
        seen["body"] = request.read()
        return httpx.Response(200, json={"text": "loc=2 num=1"})

    oracle = _remote(handler, default_profile, token="secret")
    answer, record = oracle.call(Document.from_text("count categories: cat:loc"), 0)
    assert answer.text == "loc=2 num=1"
    assert record.output_tokens == 2
    assert record.was_correct is None
    assert seen["auth"] == "Bearer secret"
    assert b'"max_tokens":64' in seen["body"].replace(b" ", b"")


@pytest.mark.parametrize(
    "response, error",
    [
        (httpx.Response(500, text="boom"), OracleHttpError),
        (httpx.Response(200, text="not json"), MalformedResponse),
        (httpx.Response(200, json={"answer": "x"}), MalformedResponse),
    ],
)
def test_remote_error_mapping(default_profile, response, error):
    oracle = _remote(lambda request: response, default_profile, token="")
    with pytest.raises(error) as excinfo:
        oracle.call(Document.from_text("x"), 5)
    assert excinfo.value.call_index == 5


@pytest.mark.parametrize("exc", [httpx.ConnectError("refused"), httpx.ReadTimeout("slow")])
def test_remote_unreachable_is_a_timeout(default_profile, exc):
    def handler(request):
        raise exc

    oracle = _remote(handler, default_profile, token="")
    with pytest.raises(OracleTimeout):
        oracle.call(Document.from_text("x"), 0)


def test_make_oracle(default_profile, monkeypatch):
    assert make_oracle("symbolic", default_profile).name == "symbolic"
    assert make_oracle("stochastic", default_profile).name == "stochastic"
    monkeypatch.setenv("LAMBDA_RLM_REMOTE_URL", "")
    with pytest.raises(ConfigError):
        make_oracle("remote", default_profile)
    with pytest.raises(ConfigError):
        make_oracle("gpt", default_profile)


def test_remote_url_comes_from_environment(default_profile, monkeypatch):
    monkeypatch.setenv("LAMBDA_RLM_REMOTE_URL", URL)
    oracle = make_oracle("remote", default_profile)
    assert oracle.url == URL
    oracle.close()
    oracle = make_oracle("remote", default_profile, "http://other.test/generate")
    assert oracle.url == "http://other.test/generate"
    oracle.close()
