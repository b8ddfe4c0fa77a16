#!/usr/bin/env python3
"""
λ-RLM command line: generate instances, plan, run, verify and simulate

Logs go to stderr; results go to --out files or stdout as JSON.

Usage:
  lambda-rlm demo-lambda --fact 3
  lambda-rlm gen --task aggregate --tokens 131000 --seed 0 --out data/agg.json
  lambda-rlm run --instance data/agg.json --profile appendix-a --trace-out data/trace.json
  lambda-rlm verify --suite all --out data/verify.json
  lambda-rlm scaling --task aggregate --grid 8000,16000,32000,64000,128000 --trials 10000
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import traceback
from typing import Any, Optional

from pydantic import ValidationError

from app.analysis import rlm_baseline_stub, run_ablations, simulate_scaling, sweep_optimal_k
from app.errors import ConfigError, FuelExhausted, LambdaRLMError
from app.graph import run_pipeline
from app.lambda_core import factorial_term, normalize, parse_expr, pretty, underline
from app.oracle import BACKENDS, load_profile, make_oracle
from app.oracle.remote import RemoteOracle
from app.planner import DEFAULT_ALPHA, build_plan, estimate_accuracy, estimate_cost
from app.runtime.document import Document
from app.runtime.prompts import detection_overhead, leaf_overhead
from app.schema import RunConfig, Strategy, TaskType
from app.taskgen import GENERATORS, generate, least_common
from app.tools.io import dumps, read_instance, write_csv, write_instance, write_json, write_trace
from app.utils.config import get_default_jobs, get_log_level, validate_config
from app.verify import SUITES, run_suites

logger = logging.getLogger("app.cli")

DEFAULT_GRID = "8000,16000,32000,64000,128000"


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else get_log_level(),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def emit(payload: Any, out: Optional[str] = None) -> None:
    """Write JSON to --out, or print it on stdout."""
    if out:
        write_json(out, payload)
        logger.info(f"wrote {out}")
    else:
        print(dumps(payload))


def _grid(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"invalid grid {text!r}: expected comma-separated integers") from e
    if not values or min(values) < 1:
        raise ConfigError(f"invalid grid {text!r}: values must be positive")
    return values


# ---------------------------------------------------------------- commands


def cmd_demo_lambda(args: argparse.Namespace) -> int:
    """Print every reduction step with the contracted redex underlined."""
    term = factorial_term(args.fact) if args.term is None else parse_expr(args.term)
    try:
        value, trace = normalize(term, fuel=args.fuel)
    except FuelExhausted as e:
        trace, value = e.trace, None
    for i, step in enumerate(trace.steps, 1):
        text, carets = underline(step.before, step.position)
        print(f"{i:>4} {step.kind:<5} {text}")
        print(f"{'':>4} {'':<5} {carets}")
    if value is None:
        print(f"fuel exhausted after {trace.fuel_used} steps")
        return 1
    print(f"normal form: {pretty(value)} ({trace.fuel_used} steps)")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    instance = generate(args.task, args.tokens, args.seed)
    if args.out:
        write_instance(args.out, instance)
        logger.info(f"wrote {args.task} instance n={instance.n} to {args.out}")
    else:
        print(dumps(instance))
    return 0


def _planned(args: argparse.Namespace):
    profile = load_profile(args.profile)
    task = TaskType(args.task)
    query = Document.from_text(args.query) if args.query else None
    overhead = leaf_overhead(task, query)
    plan = build_plan(
        task, args.tokens, profile, args.alpha, Strategy(args.strategy), args.k, overhead, strict=args.strict
    )
    return profile, plan, overhead


def cmd_plan(args: argparse.Namespace) -> int:
    _, plan, _ = _planned(args)
    emit(plan, args.out)
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    profile, plan, overhead = _planned(args)
    estimate = estimate_cost(
        plan,
        args.tokens,
        profile,
        overhead=overhead,
        detection_overhead=detection_overhead(),
        neural_compose=args.neural_compose,
    )
    emit(
        {
            "plan": plan.model_dump(mode="json"),
            "estimate": estimate.model_dump(mode="json"),
            "accuracy_lower_bound": estimate_accuracy(plan, args.tokens, profile, overhead=overhead),
            "rlm_baseline": rlm_baseline_stub(args.tokens, args.turns, profile).model_dump(mode="json"),
        },
        args.out,
    )
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = RunConfig(
            task=args.task,
            tokens=args.tokens,
            seed=args.seed,
            profile=args.profile,
            strategy=Strategy(args.strategy),
            k=args.k,
            alpha=args.alpha,
            backend=args.backend,
            url=args.url,
            instance=args.instance,
            trace_out=args.trace_out,
            out=args.out,
            jobs=args.jobs,
            prune=not args.no_prune,
            neural_compose=args.neural_compose,
            strict=args.strict,
        )
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {e.errors()[0]['msg']}") from e

    profile = load_profile(config.profile, seed=config.seed)
    if config.instance:
        instance = read_instance(config.instance)
    else:
        instance = generate(config.task, config.tokens, config.seed)

    oracle = make_oracle(config.backend, profile, config.url)
    try:
        state = run_pipeline(config, instance, profile, oracle)
    finally:
        if isinstance(oracle, RemoteOracle):
            oracle.close()

    trace = state["trace"]
    if config.trace_out:
        write_trace(config.trace_out, trace)
        logger.info(f"wrote trace to {config.trace_out}")
    summary = {
        "task": state["plan"].task.value,
        "n": instance.n,
        "score": state["score"],
        "calls": trace.oracle_calls,
        "predicted_calls": state["estimate"].predicted_calls,
        "cost": trace.accumulated_cost,
        "estimated_cost": state["estimate"].total,
        "flags": trace.flags,
    }
    if instance.task == TaskType.AGGREGATE and isinstance(state["answer"], dict):
        summary["least_common"] = least_common(state["answer"])
    if config.out:
        write_json(config.out, {"summary": summary, "answer": state["answer"]})
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    profile = load_profile(args.profile, seed=args.seed)
    results = run_suites(names, profile, args.seed, trials=args.trials, jobs=args.jobs or 1)
    emit(results, args.out)
    for suite in results:
        logger.info(f"{suite.suite:<12} {suite.summary:>9} {'ok' if suite.passed else 'FAILED'}")
    return 0 if all(s.passed for s in results) else 1


def cmd_scaling(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile)
    rows = simulate_scaling(
        TaskType(args.task),
        _grid(args.grid),
        args.trials,
        profile,
        args.seed,
        jobs=args.jobs or get_default_jobs(),
        truncate=args.truncate,
    )
    if args.out:
        write_csv(args.out, rows)
        logger.info(f"wrote {len(rows)} rows to {args.out}")
    else:
        print(dumps(rows))
    return 0


def cmd_sweep_k(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile)
    sweep = sweep_optimal_k(args.tokens, args.tau, profile, args.k_max)
    emit(
        {
            "n": args.tokens,
            "tau": args.tau,
            "argmin": sweep.argmin,
            "table": [{"k": k, "bound": v} for k, v in sweep.table],
            "sketch": sweep.sketch._asdict(),
            "sketch_table": [{"k": k, "value": v} for k, v in sweep.sketch_table],
        },
        args.out,
    )
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile)
    rows = run_ablations(args.tokens, args.trials, profile, args.seed, jobs=args.jobs or get_default_jobs())
    if args.out:
        write_csv(args.out, rows)
    else:
        print(dumps(rows))
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, profile: str = "default") -> None:
    p.add_argument("--profile", default=profile, help="profile name or JSON path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")
    p.add_argument("--verbose", "-v", action="store_true", help="DEBUG logging")


def _add_planning(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.APPENDIX_SQRT.value)
    p.add_argument("--k", type=int, default=None, help="branching factor for --strategy fixed")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="accuracy target")
    p.add_argument("--strict", action="store_true", help="fail on an unknown task or an unreachable alpha")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambda-rlm", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo-lambda", help="trace a λ-term to normal form")
    p.add_argument("--term", default=None, help="term source, e.g. '(\\x. x) 5'")
    p.add_argument("--fact", type=int, default=3, help="reduce Y G n when no --term is given")
    p.add_argument("--fuel", type=int, default=10_000)
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_demo_lambda)

    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("--task", choices=sorted(GENERATORS), required=True)
    p.add_argument("--tokens", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    for name, func, text in (
        ("plan", cmd_plan, "choose (k*, tau*, d) for a prompt length"),
        ("estimate", cmd_estimate, "predicted cost, calls and accuracy bound"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--task", choices=[t.value for t in TaskType], required=True)
        p.add_argument("--tokens", type=int, required=True)
        p.add_argument("--query", default=None, help="query text for search and multi_hop")
        _add_common(p)
        _add_planning(p)
        if name == "estimate":
            p.add_argument("--neural-compose", action="store_true")
            p.add_argument("--turns", type=int, default=8, help="turns of the REPL baseline model")
        p.set_defaults(func=func)

    p = sub.add_parser("run", help="detect, plan, estimate, execute and score one instance")
    p.add_argument("--instance", default=None, help="instance JSON written by gen")
    p.add_argument("--task", choices=sorted(GENERATORS), default=None)
    p.add_argument("--tokens", type=int, default=None)
    p.add_argument("--backend", choices=BACKENDS, default="symbolic")
    p.add_argument("--url", default=None, help="endpoint of the remote backend (default: $LAMBDA_RLM_REMOTE_URL)")
    p.add_argument("--trace-out", default=None)
    p.add_argument("--jobs", type=int, default=1, help="worker threads for leaf calls")
    p.add_argument("--no-prune", action="store_true", help="disable preview filtering")
    p.add_argument("--neural-compose", action="store_true", help="oracle call at every internal node")
    _add_common(p)
    _add_planning(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--trials", type=int, default=1000, help="Monte-Carlo trials of the accuracy suite")
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", help="direct vs λ-RLM accuracy over prompt lengths")
    p.add_argument("--task", choices=[t.value for t in TaskType], default=TaskType.AGGREGATE.value)
    p.add_argument("--grid", default=DEFAULT_GRID)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--truncate", action="store_true", help="direct baseline sees the first K tokens")
    _add_common(p, profile="scaling")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("sweep-k", help="exhaustive optimal-k sweep of the cost bound")
    p.add_argument("--tokens", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--k-max", type=int, default=16)
    _add_common(p)
    p.set_defaults(func=cmd_sweep_k)

    p = sub.add_parser("ablate", help="qualitative ablations in simulation")
    p.add_argument("--tokens", type=int, default=64_000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--jobs", type=int, default=None)
    _add_common(p, profile="scaling")
    p.set_defaults(func=cmd_ablate)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(getattr(args, "verbose", False))

    is_valid, issues = validate_config()
    if not is_valid:
        for issue in issues:
            logger.warning(f"config: {issue}")

    try:
        return args.func(args)
    except LambdaRLMError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        logger.debug(traceback.format_exc())
        print(json.dumps(e.to_dict(), sort_keys=True, default=str))
        return 1
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug(traceback.format_exc())
        print(json.dumps({"error": str(e), "type": type(e).__name__, "detail": {}}, sort_keys=True))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
