"""
Monte-Carlo experiments with the stochastic oracle: scaling laws and ablations
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from multiprocessing import Pool
from typing import NamedTuple, Optional, Sequence

import numpy as np

from app.analysis.bounds import accuracy_lower_bound, direct_accuracy
from app.oracle.profile import OracleProfile, accuracy_at
from app.oracle.stochastic import StochasticOracle
from app.planner import DEFAULT_ALPHA, build_plan, estimate_accuracy
from app.runtime.combinators import peek
from app.runtime.compose import parse_answer
from app.runtime.document import Document
from app.runtime.executor import execute_phi
from app.runtime.prompts import leaf_overhead, leaf_prompt
from app.schema import AblationRow, ExecTrace, Plan, ScalingRow, Strategy, TaskInstance, TaskType
from app.taskgen import generate, instance_document, score_instance

logger = logging.getLogger(__name__)

# Generator family used for each task type.
TASK_FAMILIES: dict[TaskType, str] = {
    TaskType.SEARCH: "needle",
    TaskType.AGGREGATE: "aggregate",
    TaskType.PAIRWISE: "pairwise",
    TaskType.MULTI_HOP: "multihop",
    TaskType.CLASSIFY: "classify",
    TaskType.SUMMARISE: "summarise",
}

# Tasks whose per-query accuracy is the payload share of correct leaves.
TOKEN_WEIGHTED = frozenset({TaskType.AGGREGATE, TaskType.CLASSIFY, TaskType.SUMMARISE})

DIRECT, LAMBDA_RLM = "direct", "lambda_rlm"
RANDOM_K_RANGE = (2, 100)
Z_95 = 1.959963984540054


def trial_seed(*parts: int) -> int:
    """Independent 32-bit seed derived from (seed, n, trial, …)."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def wilson_interval(p: float, trials: int, z: float = Z_95) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(max(0.0, p * (1 - p)) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def per_query_accuracy(trace: ExecTrace) -> float:
    """
    Fraction of leaf payload handled by correct calls; zero when any neural
    composition or synthesis call was wrong.
    """
    if any(c.was_correct is False for c in trace.calls_of("compose", "synth")):
        return 0.0
    leaves = trace.calls_of("leaf", "direct")
    total = sum(c.chunk_tokens for c in leaves)
    if total == 0:
        return 1.0
    return sum(c.chunk_tokens for c in leaves if c.was_correct) / total


class Outcome(NamedTuple):
    accuracy: float
    exact: float
    calls: int
    cost: float


@dataclass(frozen=True)
class TrialSetup:
    """Everything a worker process needs to replay a block of trials."""

    instance: TaskInstance
    profile: OracleProfile
    method: str
    seed: int
    stream: int = 0
    plan: Optional[Plan] = None
    truncate: bool = False
    prune: bool = True
    neural_compose: bool = False
    random_k: bool = False


def _direct_trial(setup: TrialSetup, doc: Document, query: Document, trial: int) -> Outcome:
    instance = setup.instance
    profile = setup.profile.model_copy(
        update={"seed": trial_seed(setup.seed, instance.n, trial, setup.stream)}
    )
    oracle = StochasticOracle(profile)
    overhead = leaf_overhead(instance.task, query)
    seen = doc
    if setup.truncate and len(doc) + overhead > profile.K:
        seen = peek(doc, 0, max(0, profile.K - overhead))
    answer, record = oracle.call(
        leaf_prompt(seen, instance.task, query), 0, enforce_window=False
    )
    value, _ = parse_answer(instance.task, answer.text)
    correct = 1.0 if record.was_correct else 0.0
    accuracy = correct * len(seen) / len(doc) if len(doc) else correct
    exact = 1.0 if score_instance(instance, value) == 1.0 else 0.0
    return Outcome(accuracy, exact, 1, record.cost)


def _random_k_plan(setup: TrialSetup, query: Document, trial: int) -> Plan:
    instance = setup.instance
    rng = np.random.default_rng([setup.seed, instance.n, trial, setup.stream, 1])
    k = int(rng.integers(RANDOM_K_RANGE[0], RANDOM_K_RANGE[1] + 1))
    return build_plan(
        instance.task,
        instance.n,
        setup.profile,
        strategy=Strategy.FIXED,
        k=k,
        reserve=leaf_overhead(instance.task, query),
    )


def _rlm_trial(setup: TrialSetup, doc: Document, query: Document, trial: int) -> Outcome:
    instance = setup.instance
    plan = _random_k_plan(setup, query, trial) if setup.random_k else setup.plan
    profile = setup.profile.model_copy(
        update={"seed": trial_seed(setup.seed, instance.n, trial, setup.stream)}
    )
    answer, trace = execute_phi(
        doc,
        plan,
        StochasticOracle(profile),
        query=query,
        prune=setup.prune,
        neural_compose=setup.neural_compose,
    )
    if plan.task != instance.task:
        # answer shape of another task: scored as is
        accuracy = exact = score_instance(instance, answer)
    else:
        exact = 1.0 if score_instance(instance, answer) == 1.0 else 0.0
        accuracy = per_query_accuracy(trace) if plan.task in TOKEN_WEIGHTED else exact
    return Outcome(accuracy, exact, trace.oracle_calls, trace.accumulated_cost)


def _run_block(setup: TrialSetup, start: int, stop: int) -> list[Outcome]:
    doc = instance_document(setup.instance)
    query = Document.from_text(setup.instance.query)
    trial = _direct_trial if setup.method == DIRECT else _rlm_trial
    return [trial(setup, doc, query, t) for t in range(start, stop)]


def run_trials(setup: TrialSetup, trials: int, jobs: int = 1) -> list[Outcome]:
    """Trials in index order; a process pool splits them into contiguous blocks."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    jobs = max(1, min(jobs, trials))
    if jobs == 1:
        return _run_block(setup, 0, trials)
    bounds = np.linspace(0, trials, jobs + 1).astype(int)
    blocks = [(setup, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    with Pool(processes=jobs) as pool:
        results = pool.starmap(_run_block, blocks)
    return [outcome for block in results for outcome in block]


def _summarise(outcomes: Sequence[Outcome]) -> dict[str, float]:
    table = np.array(outcomes, dtype=float)
    accuracy = float(table[:, 0].mean())
    low, high = wilson_interval(accuracy, len(outcomes))
    return {
        "trials": len(outcomes),
        "empirical_accuracy": min(1.0, max(0.0, accuracy)),
        "exact_accuracy": float(table[:, 1].mean()),
        "ci_low": low,
        "ci_high": high,
        "mean_calls": float(table[:, 2].mean()),
        "mean_cost": float(table[:, 3].mean()),
    }


def simulate_scaling(
    task: TaskType,
    n_grid: Sequence[int],
    trials: int,
    profile: OracleProfile,
    seed: int = 0,
    *,
    jobs: int = 1,
    truncate: bool = False,
    alpha: float = DEFAULT_ALPHA,
) -> list[ScalingRow]:
    """
    Direct inference against λ-RLM over a grid of prompt lengths.

    One instance per grid point; every trial reseeds the stochastic oracle,
    so serial and parallel runs give identical rows.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    family = TASK_FAMILIES[task]
    rows: list[ScalingRow] = []
    for n in n_grid:
        instance = generate(family, n, trial_seed(seed, n))
        query = Document.from_text(instance.query)
        overhead = leaf_overhead(task, query)
        plan = build_plan(task, instance.n, profile, alpha, reserve=overhead)

        direct = run_trials(
            TrialSetup(instance, profile, DIRECT, seed, stream=0, truncate=truncate), trials, jobs
        )
        if truncate and instance.n + overhead > profile.K:
            seen = max(0, profile.K - overhead)
            predicted = accuracy_at(profile, profile.K) * seen / instance.n
        else:
            predicted = direct_accuracy(instance.n, profile, overhead=overhead)
        rows.append(
            ScalingRow(
                n=instance.n,
                method=DIRECT,
                predicted=predicted,
                lower_bound=predicted,
                **_summarise(direct),
            )
        )

        rlm = run_trials(TrialSetup(instance, profile, LAMBDA_RLM, seed, stream=1, plan=plan), trials, jobs)
        deterministic = plan.compose.deterministic
        rows.append(
            ScalingRow(
                n=instance.n,
                method=LAMBDA_RLM,
                predicted=estimate_accuracy(plan, instance.n, profile, overhead=overhead),
                lower_bound=accuracy_lower_bound(
                    instance.n,
                    plan.k_star,
                    plan.tau_star,
                    plan.depth,
                    profile,
                    deterministic=deterministic,
                    overhead=overhead,
                ),
                **_summarise(rlm),
            )
        )
        logger.info(
            f"scaling n={instance.n}: direct={rows[-2].empirical_accuracy:.4f} "
            f"λ-RLM={rows[-1].empirical_accuracy:.4f} ({trials} trials)"
        )
    return rows


def run_ablations(
    n: int,
    trials: int,
    profile: OracleProfile,
    seed: int = 0,
    *,
    jobs: int = 1,
    alpha: float = DEFAULT_ALPHA,
) -> list[AblationRow]:
    """
    Qualitative ablations: random k, a fixed wrong task, neural ⊕ everywhere,
    and search without the preview filter.
    """
    aggregate = generate("aggregate", n, trial_seed(seed, n))
    needle = generate("needle", n, trial_seed(seed, n, 1))

    def base(instance: TaskInstance, task: Optional[TaskType] = None) -> TrialSetup:
        query = Document.from_text(instance.query)
        task = task or instance.task
        plan = build_plan(task, instance.n, profile, alpha, reserve=leaf_overhead(task, query))
        return TrialSetup(instance, profile, LAMBDA_RLM, seed, plan=plan)

    full = base(aggregate)
    search = base(needle)
    variants = {
        "full": full,
        "random_k": replace(full, random_k=True, stream=1),
        "fixed_task=classify": replace(base(aggregate, TaskType.CLASSIFY), stream=2),
        "neural_compose": replace(full, neural_compose=True, stream=3),
        "search_full": replace(search, stream=4),
        "no_prefilter": replace(search, prune=False, stream=5),
    }

    rows = []
    for name, setup in variants.items():
        summary = _summarise(run_trials(setup, trials, jobs))
        rows.append(
            AblationRow(
                variant=name,
                trials=trials,
                accuracy=summary["empirical_accuracy"],
                exact_accuracy=summary["exact_accuracy"],
                mean_calls=summary["mean_calls"],
                mean_cost=summary["mean_cost"],
            )
        )
        logger.info(f"ablation {name}: accuracy={rows[-1].accuracy:.4f} calls={rows[-1].mean_calls:.1f}")
    return rows
