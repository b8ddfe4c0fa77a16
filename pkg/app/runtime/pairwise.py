"""
Pairwise tasks: neural labelling in O(n/τ*) calls, then a free symbolic cross
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional

from app.runtime.combinators import cross_op, filter_op, split
from app.runtime.compose import parse_labels
from app.runtime.document import Document
from app.runtime.executor import record_call, validate_plan
from app.runtime.prompts import leaf_overhead, leaf_prompt
from app.runtime.trace import TraceRecorder
from app.schema import ExecTrace, Plan, TaskType

if TYPE_CHECKING:
    from app.oracle.base import Oracle

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class PairPredicate:
    """`keep` filters single labels (the Filter stage); `match` decides a pair."""

    name: str
    keep: Callable[[str], bool]
    match: Callable[[str, str], bool]


def same_label() -> PairPredicate:
    return PairPredicate("same_label", lambda _: True, lambda a, b: a == b)


def both(label: str) -> PairPredicate:
    return PairPredicate(f"both:{label}", lambda x: x == label, lambda a, b: True)


def pairs_from_labels(labels: dict[int, str], predicate: PairPredicate) -> list[Pair]:
    """S = {(i, j) | i, j ∈ Q, i < j, match(l_i, l_j)} with Q the kept items."""
    kept = filter_op(lambda item: predicate.keep(labels[item]), sorted(labels))
    return sorted(
        (i, j) for i, j in cross_op(kept, kept) if i < j and predicate.match(labels[i], labels[j])
    )


def brute_force_pairs(labels: dict[int, str], predicate: PairPredicate) -> list[Pair]:
    items = sorted(labels)
    out = []
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            i, j = items[a], items[b]
            li, lj = labels[i], labels[j]
            if predicate.keep(li) and predicate.keep(lj) and predicate.match(li, lj):
                out.append((i, j))
    return out


def execute_pairwise(
    doc: Document,
    predicate: PairPredicate,
    plan: Plan,
    oracle: "Oracle",
    *,
    recorder: Optional[TraceRecorder] = None,
    jobs: int = 1,
) -> tuple[list[Pair], ExecTrace]:
    """
    Phase A (neural): split into ⌈n/τ*⌉ chunks and label every item.
    Phase B (symbolic): parse, filter and cross the labels at zero cost.
    """
    recorder = recorder or TraceRecorder(oracle.name)
    validate_plan(plan, oracle.profile.K, leaf_overhead(TaskType.PAIRWISE))

    n = len(doc)
    chunks = split(doc, max(1, -(-n // plan.tau_star))) if n else []
    recorder.event("neural", "map", f"label {len(chunks)} chunk(s) of ≤{plan.tau_star} tokens")

    first = recorder.reserve_index(len(chunks))

    def label(job: tuple[int, Document]) -> str:
        j, chunk = job
        answer, _ = record_call(
            recorder,
            oracle,
            leaf_prompt(chunk, TaskType.PAIRWISE),
            first + j,
            kind="leaf",
            depth=1 if len(chunks) > 1 else 0,
            payload=len(chunk),
        )
        return answer.text

    if jobs > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            texts = list(pool.map(label, enumerate(chunks)))
    else:
        texts = [label(job) for job in enumerate(chunks)]

    # Parse(Concat(labels)): one record per line across all leaf outputs
    joined = "\n".join(texts)
    records, errors = parse_labels(joined)
    if errors:
        recorder.count("parse_errors", errors)
        recorder.flag("parse_errors")
        logger.warning(f"pairwise: dropped {errors} malformed label record(s)")
    labels = dict(records)
    recorder.event("symbolic", "parse", f"{len(labels)} labelled item(s), {errors} error(s)")

    pairs = pairs_from_labels(labels, predicate)
    recorder.event("symbolic", "cross", f"{predicate.name}: {len(pairs)} pair(s)")
    logger.info(f"pairwise: {len(chunks)} neural call(s), {len(pairs)} pair(s)")
    return pairs, recorder.build(plan, pairs)

