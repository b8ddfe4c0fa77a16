"""
Analyzer nodes - task detection and plan construction
"""

import logging

from app.planner import build_plan, detect_task
from app.runtime.combinators import preview
from app.runtime.prompts import DETECTION_PREVIEW, leaf_overhead
from app.state import RunState

logger = logging.getLogger(__name__)


def detect_node(state: RunState) -> RunState:
    """
    Detect the task type from a preview of the prompt (one oracle call).
    """
    doc = state["doc"]
    task = detect_task(
        preview(doc, DETECTION_PREVIEW),
        len(doc),
        state["oracle"],
        state["recorder"],
        strict=state["config"].strict,
    )
    return {"task": task}


def plan_node(state: RunState) -> RunState:
    """
    Look up (⊕, π) and choose (k*, τ*, d). Pure: no oracle call.

    The leaf header and query tokens are reserved out of the window so every
    leaf prompt fits.
    """
    config = state["config"]
    task = state["task"]
    plan = build_plan(
        task,
        len(state["doc"]),
        state["profile"],
        config.alpha,
        config.strategy,
        config.k,
        reserve=leaf_overhead(task, state.get("query")),
        strict=config.strict,
    )
    for flag in plan.flags:
        state["recorder"].flag(flag)
    return {"plan": plan}
