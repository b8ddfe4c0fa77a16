"""
Planner: task detection, plan lookup, (k*, τ*, d) selection and pre-execution estimates

Everything here except detect_task is pure and makes no oracle call.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import TYPE_CHECKING, NamedTuple, Optional

from app.errors import InfeasibleAccuracy, PlanInvalid, UnrecognizedTask
from app.oracle.profile import (
    OracleProfile,
    accuracy_at,
    composition_accuracy,
    composition_cost,
    cost_of,
)
from app.runtime.combinators import chunk_sizes, leaf_sizes
from app.runtime.document import Document
from app.runtime.executor import depth_for, record_call
from app.runtime.prompts import detection_budget, detection_prompt
from app.runtime.trace import TraceRecorder
from app.schema import CompositionOp, CostEstimate, Plan, Stage, Strategy, TaskType

if TYPE_CHECKING:
    from app.oracle.base import Oracle

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.80

# Task type -> (⊕, π)
PLAN_TABLE: dict[TaskType, tuple[CompositionOp, list[Stage]]] = {
    TaskType.SEARCH: (
        CompositionOp.FILTER_BEST,
        [Stage.SPLIT, Stage.MAP_PEEK, Stage.FILTER, Stage.MAP_ORACLE, Stage.BEST],
    ),
    TaskType.CLASSIFY: (CompositionOp.CONCAT, [Stage.SPLIT, Stage.MAP_ORACLE, Stage.CONCAT]),
    TaskType.AGGREGATE: (CompositionOp.MERGE_COUNTS, [Stage.SPLIT, Stage.MAP_ORACLE, Stage.MERGE]),
    TaskType.PAIRWISE: (
        CompositionOp.CROSS_FILTER,
        [Stage.SPLIT, Stage.MAP_ORACLE, Stage.PARSE, Stage.FILTER, Stage.CROSS],
    ),
    TaskType.SUMMARISE: (
        CompositionOp.NEURAL_CONCAT,
        [Stage.SPLIT, Stage.MAP_ORACLE, Stage.CONCAT, Stage.SYNTH],
    ),
    TaskType.MULTI_HOP: (
        CompositionOp.NEURAL_SYNTH,
        [Stage.SPLIT_DELTA, Stage.MAP_PEEK, Stage.FILTER, Stage.MAP_ORACLE, Stage.SYNTH],
    ),
}

# Sub-queries answered independently by single leaves.
DECOMPOSABLE = frozenset(
    {TaskType.SEARCH, TaskType.CLASSIFY, TaskType.AGGREGATE, TaskType.PAIRWISE}
)


class PlanParameters(NamedTuple):
    k_star: int
    tau_star: int
    depth: int
    depth_appendix: int = 0
    infeasible: bool = False
    flags: tuple[str, ...] = ()


def detect_task(
    preview: Document,
    length: int,
    oracle: "Oracle",
    recorder: Optional[TraceRecorder] = None,
    *,
    strict: bool = False,
) -> TaskType:
    """
    One oracle call picks a task type from the menu.

    The preview is trimmed so the detection prompt fits the oracle window.
    An off-menu answer falls back to aggregate and sets the
    `unrecognized_task` flag on the recorder; with `strict` it raises
    UnrecognizedTask instead.
    """
    recorder = recorder or TraceRecorder(oracle.name)
    budget = detection_budget(len(preview), oracle.profile.K)
    if budget < len(preview):
        preview = preview.slice(0, budget)
    prompt = detection_prompt(preview, length)
    answer, _ = record_call(
        recorder,
        oracle,
        prompt,
        recorder.reserve_index(),
        kind="detect",
        depth=0,
        payload=len(preview),
    )
    name = answer.text.strip()
    try:
        task = TaskType(name)
    except ValueError:
        if strict:
            raise UnrecognizedTask(
                f"detection answered {name!r}, not a known task",
                {"answer": name, "menu": [t.value for t in TaskType]},
            )
        logger.warning(f"detect: off-menu answer {name!r}, defaulting to aggregate")
        recorder.flag("unrecognized_task")
        recorder.event("planning", "detect", f"unrecognized {name!r}")
        return TaskType.AGGREGATE
    recorder.event("planning", "detect", task.value)
    logger.info(f"detect: task={task.value} (n={length})")
    return task


def lookup_plan(task: TaskType) -> tuple[CompositionOp, list[Stage]]:
    compose, pipeline = PLAN_TABLE[task]
    return compose, list(pipeline)


def plan_parameters(
    n: int,
    profile: OracleProfile,
    alpha: float = DEFAULT_ALPHA,
    strategy: Strategy = Strategy.APPENDIX_SQRT,
    *,
    k: Optional[int] = None,
    reserve: int = 0,
    compose: Optional[CompositionOp] = None,
    strict: bool = False,
) -> PlanParameters:
    """
    Choose (k*, τ*, d).

    Args:
        n: prompt length
        profile: oracle constants
        alpha: accuracy target of the appendix_sqrt loop
        strategy: appendix_sqrt, theorem_k2, or fixed (needs k)
        k: branching factor for the fixed strategy
        reserve: per-call header tokens; leaves must fit K - reserve
        compose: ⊕ of the plan; A⊕ counts only for neural operators
        strict: raise InfeasibleAccuracy instead of flagging an unmet target

    Returns:
        PlanParameters; `depth` is ⌈log_k(n/τ)⌉, used by the executor, and
        `depth_appendix` is ⌈log_k(n/K)⌉
    """
    if n < 1:
        raise PlanInvalid("prompt length must be at least 1", {"n": n})
    if not 0 < alpha <= 1:
        raise PlanInvalid("alpha must lie in (0, 1]", {"alpha": alpha})
    window = profile.K - reserve
    if window < 1:
        raise PlanInvalid(
            f"header of {reserve} tokens leaves no room in K={profile.K}",
            {"K": profile.K, "reserve": reserve},
        )
    if n <= window:
        return PlanParameters(1, n, 0, 0)

    flags: list[str] = []
    a_plus = composition_accuracy(profile, compose is None or compose.deterministic)

    if strategy == Strategy.FIXED:
        if k is None or k < 2:
            raise PlanInvalid("strategy=fixed requires k ≥ 2", {"k": k})
        k_star = k
    elif strategy == Strategy.APPENDIX_SQRT and profile.c_oplus > 0:
        k_star = max(2, math.ceil(math.sqrt(n * profile.c_in / profile.c_oplus)))
    else:
        if strategy == Strategy.APPENDIX_SQRT:
            flags.append("c_oplus_zero_fallback")
            logger.debug("plan: c⊕ = 0, sqrt rule undefined, using k* = 2")
        k_star = 2

    # accuracy constraint, evaluated with A(K) and the algorithm d-definition
    a_window = accuracy_at(profile, profile.K)
    d_app = depth_for(n, k_star, profile.K)
    if strategy == Strategy.APPENDIX_SQRT:
        while a_window**d_app * a_plus**d_app < alpha and k_star < n / profile.K:
            k_star += 1
            d_app = depth_for(n, k_star, profile.K)
    infeasible = a_window**d_app * a_plus**d_app < alpha
    if infeasible and strict:
        raise InfeasibleAccuracy(
            f"accuracy target {alpha} unreachable for n={n}",
            {"alpha": alpha, "k_star": k_star, "bound": a_window**d_app * a_plus**d_app},
        )
    if infeasible:
        flags.append("infeasible_accuracy")
        logger.warning(
            f"plan: accuracy target {alpha} unmet at k*={k_star} "
            f"(A(K)^d·A⊕^d = {a_window**d_app * a_plus**d_app:.4f})"
        )

    tau_star = max(1, min(window, n // k_star))
    depth = depth_for(n, k_star, tau_star)
    return PlanParameters(k_star, tau_star, depth, d_app, infeasible, tuple(flags))


def build_plan(
    task: TaskType,
    n: int,
    profile: OracleProfile,
    alpha: float = DEFAULT_ALPHA,
    strategy: Strategy = Strategy.APPENDIX_SQRT,
    k: Optional[int] = None,
    reserve: int = 0,
    strict: bool = False,
) -> Plan:
    compose, pipeline = lookup_plan(task)
    params = plan_parameters(
        n, profile, alpha, strategy, k=k, reserve=reserve, compose=compose, strict=strict
    )
    plan = Plan(
        task=task,
        compose=compose,
        pipeline=pipeline,
        n=n,
        k_star=params.k_star,
        tau_star=params.tau_star,
        depth=params.depth,
        depth_appendix=params.depth_appendix,
        strategy=strategy,
        alpha=alpha,
        infeasible=params.infeasible,
        flags=list(params.flags),
    )
    logger.info(
        f"plan: {task.value} k*={plan.k_star} τ*={plan.tau_star} d={plan.depth} "
        f"(window d={plan.depth_appendix})"
    )
    return plan


def internal_nodes(k: int, d: int) -> int:
    """1 + k + … + k^(d-1)"""
    return (k**d - 1) // (k - 1) if k >= 2 else d


def estimate_cost(
    plan: Plan,
    n: int,
    profile: OracleProfile,
    *,
    overhead: int = 0,
    detection_overhead: int = 0,
    neural_compose: bool = False,
) -> CostEstimate:
    """
    Ĉ = Σ C(|leaf|) + d · C⊕(k*) + C(preview), computed without any oracle call.

    Leaves are the chunks the executor will actually send: ceil-greedy split
    sizes at depth d, with empty chunks dropped. Pairwise plans label every
    one of their ⌈n/τ*⌉ chunks. `overhead` and `detection_overhead` add the
    prompt header tokens to the leaf and detection inputs; the detection
    preview is capped to fit the window.
    """
    deterministic = plan.compose.deterministic and not neural_compose
    k, d, tau = plan.k_star, plan.depth, plan.tau_star

    if plan.task == TaskType.PAIRWISE:
        sizes = Counter(chunk_sizes(n, max(1, -(-n // tau))))
        d = 0
    else:
        sizes = Counter({m: c for m, c in leaf_sizes(n, k, d).items() if m > 0})
    leaf_calls = sum(sizes.values())
    leaf_terms = [cost_of(profile, m + overhead) for m, c in sizes.items() for _ in range(c)]
    leaf_cost = math.fsum(leaf_terms)
    comp_cost = d * composition_cost(profile, k, deterministic)
    comp_calls = 0 if deterministic else internal_nodes(k, d)
    detection_cost = cost_of(profile, detection_budget(n, profile.K) + detection_overhead)

    return CostEstimate(
        total=math.fsum(leaf_terms + [comp_cost, detection_cost]),
        leaf_calls=leaf_calls,
        detection_calls=1,
        composition_calls=comp_calls,
        leaf_cost=leaf_cost,
        composition_cost=comp_cost,
        detection_cost=detection_cost,
        predicted_calls=leaf_calls + 1 + comp_calls,
    )


def estimate_accuracy(
    plan: Plan,
    n: int,
    profile: OracleProfile,
    *,
    overhead: int = 0,
    decomposable: Optional[bool] = None,
) -> float:
    """
    Lower bound on end-to-end accuracy.

    (i) d = 0: A(τ*); (iii) A(τ*) = 1: A⊕^d; (iv) decomposable with A⊕ = 1:
    A(τ*); (ii) otherwise A(τ*)^(n·k*/τ*) · A⊕^d.
    """
    a_tau = accuracy_at(profile, plan.tau_star + overhead)
    d = plan.depth
    if d == 0:
        return a_tau
    a_plus = composition_accuracy(profile, plan.compose.deterministic)
    if a_tau == 1.0:
        return a_plus**d
    if decomposable is None:
        decomposable = plan.task in DECOMPOSABLE
    if decomposable and a_plus == 1.0:
        return a_tau
    return a_tau ** (n * plan.k_star / plan.tau_star) * a_plus**d
