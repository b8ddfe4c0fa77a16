"""
Multi-hop search: preview, filter, read the relevant documents, synthesize once
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Optional

from app.errors import PlanInvalid
from app.runtime.combinators import keywords, peek, preview, relevant
from app.runtime.compose import parse_facts, parse_value, render_facts
from app.runtime.document import Document
from app.runtime.executor import record_call
from app.runtime.prompts import SYNTH_HEADER, leaf_overhead, leaf_prompt, synth_prompt
from app.runtime.trace import TraceRecorder
from app.schema import ExecTrace, Plan, TaskType

if TYPE_CHECKING:
    from app.oracle.base import Oracle

logger = logging.getLogger(__name__)

DEFAULT_PREVIEW_BUDGET = 500


def execute_multihop(
    corpus: list[Document],
    query: Document,
    oracle: "Oracle",
    preview_budget: int = DEFAULT_PREVIEW_BUDGET,
    *,
    plan: Optional[Plan] = None,
    recorder: Optional[TraceRecorder] = None,
) -> tuple[Optional[str], ExecTrace]:
    """
    Oracle calls are |retained| extractions plus exactly one synthesis.
    With no relevant document the synthesis still runs, on empty evidence.
    """
    if not corpus:
        raise PlanInvalid("multi-hop search needs a nonempty corpus")
    recorder = recorder or TraceRecorder(oracle.name)
    window = oracle.profile.K

    # A: Peek + Filter (symbolic)
    is_relevant = relevant(keywords(query))
    retained = [doc for doc in corpus if is_relevant(preview(doc, preview_budget))]
    recorder.count("pruned_chunks", len(corpus) - len(retained))
    recorder.event(
        "symbolic", "filter", f"previewed {len(corpus)} doc(s), retained {len(retained)}"
    )
    if not retained:
        recorder.flag("no_relevant_documents")
        logger.warning("multi-hop: no relevant documents, synthesizing on empty evidence")

    # B: Read (neural, one extraction per retained document)
    limit = window - leaf_overhead(TaskType.MULTI_HOP, query)
    first = recorder.reserve_index(len(retained))
    evidence: list[str] = []
    for j, doc in enumerate(retained):
        if len(doc) > limit:
            recorder.flag("document_truncated")
            logger.warning(f"multi-hop: document of {len(doc)} tokens clamped to {limit}")
            doc = peek(doc, 0, limit)
        answer, _ = record_call(
            recorder,
            oracle,
            leaf_prompt(doc, TaskType.MULTI_HOP, query),
            first + j,
            kind="extract",
            depth=1,
            payload=len(doc),
        )
        facts = parse_facts(answer.text)
        evidence.append(render_facts(facts))

    # C: Synthesize (neural, one call)
    evidence_doc = Document.from_text("\n".join(evidence))
    room = window - len(SYNTH_HEADER) - len(query) - 1
    if len(evidence_doc) > room:
        recorder.flag("evidence_truncated")
        evidence_doc = peek(evidence_doc, 0, max(0, room))
    prompt = synth_prompt(query, evidence_doc)
    answer, _ = record_call(
        recorder,
        oracle,
        prompt,
        recorder.reserve_index(),
        kind="synth",
        depth=0,
        payload=len(evidence_doc),
    )
    value = parse_value(answer.text)
    logger.info(f"multi-hop: {len(retained)} extraction(s) + 1 synthesis -> {value}")
    return value, recorder.build(plan, value)
