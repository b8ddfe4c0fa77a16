"""
Integration tests for the command line
"""

import csv
import importlib.util
import json
from pathlib import Path

from app.cli import main
from app.taskgen import least_common
from app.tools.io import read_instance, read_trace


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_demo_lambda_factorial(capsys):
    assert main(["demo-lambda", "--fact", "3"]) == 0
    out = capsys.readouterr().out
    assert "normal form: 6" in out
    assert "^" in out


def test_demo_lambda_out_of_fuel(capsys):
    assert main(["demo-lambda", "--term", r"(\x. x x) (\x. x x)", "--fuel", "10"]) == 1
    assert "fuel exhausted after 10 steps" in capsys.readouterr().out


def test_gen_writes_instance(tmp_path):
    path = tmp_path / "needle.json"
    assert main(["gen", "--task", "needle", "--tokens", "500", "--seed", "2", "--out", str(path)]) == 0
    instance = read_instance(path)
    assert instance.n == 500
    assert instance.seed == 2


def test_plan_command(capsys):
    assert main(["plan", "--task", "aggregate", "--tokens", "131000", "--profile", "appendix-a"]) == 0
    plan = _stdout_json(capsys)
    assert (plan["k_star"], plan["tau_star"], plan["depth"]) == (5, 26_200, 1)


def test_strict_plan_fails_on_unreachable_alpha(capsys):
    argv = ["plan", "--task", "aggregate", "--tokens", "131000", "--profile", "appendix-a", "--alpha", "0.99"]
    assert main(argv) == 0
    assert _stdout_json(capsys)["infeasible"]
    assert main([*argv, "--strict"]) == 1
    assert _stdout_json(capsys)["type"] == "InfeasibleAccuracy"


def test_estimate_command(capsys):
    argv = ["estimate", "--task", "aggregate", "--tokens", "131000", "--profile", "appendix-a"]
    assert main(argv) == 0
    report = _stdout_json(capsys)
    assert report["estimate"]["predicted_calls"] == 6
    assert abs(report["estimate"]["total"] - 0.17) <= 0.005
    assert report["rlm_baseline"]["calls"] == 8
    assert 0 < report["accuracy_lower_bound"] <= 1


def test_run_from_instance_file(tmp_path, capsys):
    instance_path = tmp_path / "agg.json"
    trace_path = tmp_path / "trace.json"
    main(["gen", "--task", "aggregate", "--tokens", "3000", "--out", str(instance_path)])
    capsys.readouterr()

    argv = ["run", "--instance", str(instance_path), "--trace-out", str(trace_path)]
    assert main(argv) == 0
    summary = _stdout_json(capsys)
    assert summary["task"] == "aggregate"
    assert summary["score"] == 1.0
    assert summary["calls"] == 2
    assert read_trace(trace_path).oracle_calls == 2
    assert summary["least_common"] == least_common(read_instance(instance_path).truth)


def test_run_generates_when_no_instance(tmp_path, capsys):
    out = tmp_path / "result.json"
    argv = ["run", "--task", "needle", "--tokens", "40000", "--jobs", "2", "--out", str(out)]
    assert main(argv) == 0
    summary = _stdout_json(capsys)
    assert summary["score"] == 1.0
    assert json.loads(out.read_text(encoding="utf-8"))["summary"] == summary


def test_run_config_error_is_reported_as_json(capsys):
    assert main(["run", "--task", "aggregate"]) == 1
    error = _stdout_json(capsys)
    assert error["type"] == "ConfigError"


def test_missing_profile(capsys):
    assert main(["plan", "--task", "aggregate", "--tokens", "1000", "--profile", "nope"]) == 1
    assert _stdout_json(capsys)["type"] == "ConfigError"


def test_unreachable_remote_backend(capsys):
    """A dead endpoint fails the first call with OracleTimeout and its index"""
    argv = [
        "run", "--task", "aggregate", "--tokens", "300",
        "--backend", "remote", "--url", "http://127.0.0.1:9/generate",
    ]
    assert main(argv) == 1
    error = _stdout_json(capsys)
    assert error["type"] == "OracleTimeout"
    assert error["detail"]["call_index"] == 0
    assert error["detail"]["kind"] == "detect"


def test_verify_lambda_suite(tmp_path):
    out = tmp_path / "verify.json"
    assert main(["verify", "--suite", "lambda", "--out", str(out)]) == 0
    results = json.loads(out.read_text(encoding="utf-8"))
    assert results[0]["suite"] == "lambda"
    assert results[0]["passed"] is True


def test_sweep_k(capsys):
    argv = ["sweep-k", "--tokens", "2620000", "--tau", "26200", "--profile", "appendix-a"]
    assert main(argv) == 0
    report = _stdout_json(capsys)
    assert report["argmin"] == 2
    assert len(report["table"]) == 15


def test_scaling_writes_csv(tmp_path):
    out = tmp_path / "scaling.csv"
    argv = ["scaling", "--grid", "4000,12000", "--trials", "3", "--jobs", "1", "--out", str(out)]
    assert main(argv) == 0
    with out.open(newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert [(r["n"], r["method"]) for r in rows] == [
        ("4000", "direct"),
        ("4000", "lambda_rlm"),
        ("12000", "direct"),
        ("12000", "lambda_rlm"),
    ]


def test_scaling_rejects_bad_grid(capsys):
    assert main(["scaling", "--grid", "8000,abc", "--trials", "1"]) == 1
    assert _stdout_json(capsys)["type"] == "ConfigError"


def test_verify_report_renders(tmp_path):
    """scripts/render_verify_report.py turns verify output into markdown"""
    spec = importlib.util.spec_from_file_location(
        "render_verify_report", Path(__file__).parents[2] / "scripts" / "render_verify_report.py"
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)

    out = tmp_path / "verify.json"
    main(["verify", "--suite", "appendix", "--out", str(out)])
    report = module.render(json.loads(out.read_text(encoding="utf-8")))
    assert "| appendix | YES | 5/5 |" in report
    assert "all checks passed" in report


def test_ablate_writes_csv(tmp_path):
    out = tmp_path / "ablate.csv"
    argv = ["ablate", "--tokens", "12000", "--trials", "2", "--jobs", "1", "--out", str(out)]
    assert main(argv) == 0
    with out.open(newline="", encoding="utf-8") as f:
        variants = [r["variant"] for r in csv.DictReader(f)]
    assert variants[0] == "full"
    assert "no_prefilter" in variants
