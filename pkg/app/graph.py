"""
Main LangGraph Definition - the λ-RLM run pipeline
"""

import logging
from typing import Any, Literal, Optional

from langgraph.graph import END, StateGraph

from app.agents.analyzer import detect_node, plan_node
from app.agents.reporter import score_node
from app.agents.runner import execute_multihop_node, execute_phi_node, execute_pairwise_node
from app.agents.supervisor import estimate_node
from app.oracle.base import Oracle
from app.oracle.profile import OracleProfile
from app.runtime.document import Document
from app.runtime.trace import TraceRecorder
from app.schema import RunConfig, TaskInstance, TaskType
from app.state import RunState
from app.taskgen import instance_document

logger = logging.getLogger(__name__)


def route_execution(
    state: RunState,
) -> Literal["execute_phi", "execute_pairwise", "execute_multihop"]:
    """
    Routing function after the estimate.

    Pairwise and multi-hop plans have their own executors; every other task
    runs through the recursive Φ.
    """
    task = state["plan"].task
    if task == TaskType.PAIRWISE:
        return "execute_pairwise"
    if task == TaskType.MULTI_HOP:
        return "execute_multihop"
    return "execute_phi"


def create_graph() -> StateGraph:
    """
    Create the run pipeline.

    Flow:
    1. detect (one oracle call on a preview)
    2. plan (pure)
    3. estimate (pure)
    4. execute_phi | execute_pairwise | execute_multihop
    5. score -> END
    """
    workflow = StateGraph(RunState)

    workflow.add_node("detect", detect_node)
    workflow.add_node("plan", plan_node)
    workflow.add_node("estimate", estimate_node)
    workflow.add_node("execute_phi", execute_phi_node)
    workflow.add_node("execute_pairwise", execute_pairwise_node)
    workflow.add_node("execute_multihop", execute_multihop_node)
    workflow.add_node("score", score_node)

    workflow.set_entry_point("detect")
    workflow.add_edge("detect", "plan")
    workflow.add_edge("plan", "estimate")
    workflow.add_conditional_edges(
        "estimate",
        route_execution,
        {
            "execute_phi": "execute_phi",
            "execute_pairwise": "execute_pairwise",
            "execute_multihop": "execute_multihop",
        },
    )
    for node in ("execute_phi", "execute_pairwise", "execute_multihop"):
        workflow.add_edge(node, "score")
    workflow.add_edge("score", END)

    return workflow


def get_compiled_graph():
    """Get the compiled graph ready for execution"""
    return create_graph().compile()


def initial_state(
    config: RunConfig,
    instance: TaskInstance,
    profile: OracleProfile,
    oracle: Oracle,
    recorder: Optional[TraceRecorder] = None,
) -> RunState:
    return {
        "config": config,
        "instance": instance,
        "profile": profile,
        "oracle": oracle,
        "doc": instance_document(instance),
        "query": Document.from_text(instance.query),
        "recorder": recorder or TraceRecorder(oracle.name),
    }


def run_pipeline(
    config: RunConfig, instance: TaskInstance, profile: OracleProfile, oracle: Oracle
) -> dict[str, Any]:
    """Run detect → plan → estimate → execute → score and return the final state."""
    graph = get_compiled_graph()
    return graph.invoke(initial_state(config, instance, profile, oracle))
