"""
Recursive combinator executor Φ

fix (λf. λP. if |P| ≤ τ* then M(leaf(P)) else ⊕(Map(f, Split(P, k*))))
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Any, Optional

from app.errors import OracleError, PlanInvalid
from app.runtime.combinators import keywords, preview, relevant, split, split_delta
from app.runtime.compose import combine, neutral_answer, parse_answer, render_answer
from app.runtime.document import Document
from app.runtime.prompts import compose_overhead, compose_prompt, leaf_overhead, leaf_prompt
from app.runtime.trace import TraceRecorder
from app.schema import ExecTrace, Plan, TaskType, TraceCall

if TYPE_CHECKING:
    from app.oracle.base import Oracle

logger = logging.getLogger(__name__)

PREVIEW_FRACTION = 10


def depth_for(n: int, k: int, tau: int) -> int:
    """⌈log_k(n/τ)⌉ in exact integer arithmetic: the least d with k^d·τ ≥ n."""
    if n <= tau:
        return 0
    if k < 2:
        raise PlanInvalid(f"k*={k} cannot reduce n={n} below τ*={tau}", {"k": k, "n": n, "tau": tau})
    d, reach = 0, tau
    while reach < n:
        reach *= k
        d += 1
    return d


def validate_plan(plan: Plan, window: int, overhead: int = 0) -> None:
    if plan.k_star < 1 or plan.tau_star < 1:
        raise PlanInvalid("plan needs k* ≥ 1 and τ* ≥ 1", plan.model_dump(mode="json"))
    if plan.tau_star + overhead > window:
        raise PlanInvalid(
            f"leaf prompt of τ*={plan.tau_star} plus {overhead} header tokens exceeds K={window}",
            {"tau_star": plan.tau_star, "overhead": overhead, "K": window},
        )


def record_call(
    recorder: TraceRecorder,
    oracle: "Oracle",
    prompt: Document,
    index: int,
    *,
    kind: str,
    depth: int,
    payload: int,
    enforce_window: bool = True,
) -> tuple[Document, Optional[bool]]:
    """Invoke the oracle and append the call to the trace."""
    try:
        answer, record = oracle.call(prompt, index, enforce_window=enforce_window)
    except OracleError as e:
        e.detail.update({"kind": kind, "depth": depth, "input_tokens": len(prompt)})
        raise
    recorder.add_call(
        TraceCall(
            index=index,
            kind=kind,
            depth=depth,
            input_tokens=record.input_tokens,
            chunk_tokens=payload,
            output_tokens=record.output_tokens,
            cost=record.cost,
            backend=oracle.name,
            was_correct=record.was_correct,
        )
    )
    return answer, record.was_correct


class PhiExecutor:
    """One execution of a plan over one document."""

    def __init__(
        self,
        plan: Plan,
        oracle: "Oracle",
        recorder: TraceRecorder,
        *,
        query: Optional[Document] = None,
        prune: bool = True,
        neural_compose: bool = False,
        jobs: int = 1,
    ):
        self.plan = plan
        self.task = plan.task
        self.oracle = oracle
        self.recorder = recorder
        self.query = query
        self.neural = neural_compose or not plan.compose.deterministic
        self.jobs = max(1, jobs)
        self.query_keys = keywords(query) if query is not None else set()
        self.pruning = prune and plan.prunes and bool(self.query_keys)
        self.overhead = leaf_overhead(self.task, query)
        self.depth = 0
        self._kind = "leaf"
        self.fallbacks = 0
        self._pool: Optional[ThreadPoolExecutor] = None

    def run(self, doc: Document) -> Any:
        validate_plan(self.plan, self.oracle.profile.K, self.overhead)
        self.depth = depth_for(len(doc), self.plan.k_star, self.plan.tau_star)
        # a prompt that fits is answered by one direct call
        self._kind = "direct" if self.depth == 0 else "leaf"
        self.recorder.event(
            "planning",
            "fix",
            f"n={len(doc)} k={self.plan.k_star} tau={self.plan.tau_star} d={self.depth}",
        )
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                self._pool = pool
                answer = self._solve(doc, 0)
            self._pool = None
        else:
            answer = self._solve(doc, 0)

        if self.fallbacks:
            logger.warning(f"pruning kept every chunk at {self.fallbacks} node(s): no preview matched")
        if self.recorder.empty_leaves:
            logger.warning(f"{self.recorder.empty_leaves} empty leaf chunk(s), not charged")
        return answer

    def _solve(self, p: Document, depth: int) -> Any:
        # the remaining depth d - depth is the rank; it must stay non-negative
        if depth > self.depth:
            raise PlanInvalid(f"recursion passed depth ceiling d={self.depth}")
        if depth == self.depth:
            return self._leaves([p], depth)[0]

        parts = split(p, self.plan.k_star)
        self.recorder.event("symbolic", "split", f"depth={depth} n={len(p)} k={len(parts)}")
        if self.pruning:
            parts = self._prune(parts, depth)
        if depth + 1 == self.depth:
            partials = self._leaves(parts, depth + 1)
        else:
            partials = [self._solve(part, depth + 1) for part in parts]
        return self._compose(partials, depth)

    def _prune(self, parts: list[Document], depth: int) -> list[Document]:
        budget = self.plan.tau_star // PREVIEW_FRACTION
        is_relevant = relevant(self.query_keys)
        keep = [part for part in parts if is_relevant(preview(part, budget))]
        if not keep:
            self.fallbacks += 1
            self.recorder.flag("prune_fallback")
            self.recorder.event("symbolic", "filter", f"depth={depth} no match, kept {len(parts)}")
            return parts
        self.recorder.count("pruned_chunks", len(parts) - len(keep))
        self.recorder.event("symbolic", "filter", f"depth={depth} kept {len(keep)}/{len(parts)}")
        return keep

    def _leaves(self, parts: list[Document], depth: int) -> list[Any]:
        live = [i for i, part in enumerate(parts) if len(part)]
        empties = len(parts) - len(live)
        if empties:
            self.recorder.count("empty_leaves", empties)
            self.recorder.flag("empty_leaves")

        first = self.recorder.reserve_index(len(live))
        jobs = [(parts[i], depth, first + j) for j, i in enumerate(live)]
        if self._pool is not None and len(jobs) > 1:
            values = list(self._pool.map(lambda job: self._leaf(*job), jobs))
        else:
            values = [self._leaf(*job) for job in jobs]

        results = [neutral_answer(self.task) for _ in parts]
        for i, value in zip(live, values):
            results[i] = value
        return results

    def _leaf(self, chunk: Document, depth: int, index: int) -> Any:
        prompt = leaf_prompt(chunk, self.task, self.query)
        answer, _ = record_call(
            self.recorder, self.oracle, prompt, index, kind=self._kind, depth=depth, payload=len(chunk)
        )
        value, errors = parse_answer(self.task, answer.text)
        if errors:
            self.recorder.count("parse_errors", errors)
        return value

    def _compose(self, partials: list[Any], depth: int) -> Any:
        if not self.neural:
            self.recorder.event(
                "symbolic", self.plan.compose.value, f"depth={depth} parts={len(partials)}"
            )
            return combine(self.task, partials)
        prompt = compose_prompt(self.task, [render_answer(self.task, p) for p in partials])
        index = self.recorder.reserve_index()
        answer, _ = record_call(
            self.recorder,
            self.oracle,
            prompt,
            index,
            kind="compose",
            depth=depth,
            payload=len(prompt) - compose_overhead(),
        )
        value, errors = parse_answer(self.task, answer.text)
        if errors:
            self.recorder.count("parse_errors", errors)
        return value


def execute_phi(
    doc: Document,
    plan: Plan,
    oracle: "Oracle",
    *,
    query: Optional[Document] = None,
    recorder: Optional[TraceRecorder] = None,
    prune: bool = True,
    neural_compose: bool = False,
    jobs: int = 1,
) -> tuple[Any, ExecTrace]:
    """
    Run a plan over a document.

    Pairwise and multi-hop plans are handed to their specialised executors.

    Args:
        doc: the prompt P
        plan: validated plan; its task picks leaf formatting and ⊕
        oracle: any backend
        query: needed by search (pruning, leaf prompt) and multi-hop
        recorder: shared with the caller when the trace must also hold the
            detection call
        prune: disable to measure the plan without its Filter stage
        neural_compose: replace ⊕ by an oracle call at every internal node
        jobs: worker threads for the leaf map stage

    Returns:
        (answer, trace)
    """
    recorder = recorder or TraceRecorder(oracle.name)

    if plan.task == TaskType.PAIRWISE:
        from app.runtime.pairwise import execute_pairwise, same_label

        return execute_pairwise(doc, same_label(), plan, oracle, recorder=recorder, jobs=jobs)
    if plan.task == TaskType.MULTI_HOP:
        from app.runtime.multihop import execute_multihop

        return execute_multihop(
            split_delta(doc), query or Document(), oracle, plan=plan, recorder=recorder
        )

    logger.info(
        f"Φ: task={plan.task.value} n={len(doc)} k*={plan.k_star} τ*={plan.tau_star} "
        f"⊕={plan.compose.value}"
    )
    executor = PhiExecutor(
        plan,
        oracle,
        recorder,
        query=query,
        prune=prune,
        neural_compose=neural_compose,
        jobs=jobs,
    )
    answer = executor.run(doc)
    return answer, recorder.build(plan, answer)
