"""
Runner nodes - deterministic execution of the plan
"""

import logging

from app.runtime.combinators import split_delta
from app.runtime.executor import execute_phi
from app.runtime.multihop import execute_multihop
from app.runtime.pairwise import execute_pairwise, same_label
from app.state import RunState

logger = logging.getLogger(__name__)


def execute_phi_node(state: RunState) -> RunState:
    """Recursive split/map/compose over the whole prompt."""
    config = state["config"]
    answer, trace = execute_phi(
        state["doc"],
        state["plan"],
        state["oracle"],
        query=state.get("query"),
        recorder=state["recorder"],
        prune=config.prune,
        neural_compose=config.neural_compose,
        jobs=config.jobs,
    )
    return {"answer": answer, "trace": trace}


def execute_pairwise_node(state: RunState) -> RunState:
    """Neural labelling per chunk, then the symbolic cross product."""
    answer, trace = execute_pairwise(
        state["doc"],
        same_label(),
        state["plan"],
        state["oracle"],
        recorder=state["recorder"],
        jobs=state["config"].jobs,
    )
    return {"answer": answer, "trace": trace}


def execute_multihop_node(state: RunState) -> RunState:
    """Preview-filter the corpus, extract per document, synthesize once."""
    corpus = split_delta(state["doc"])
    logger.debug(f"multi-hop: corpus of {len(corpus)} document(s)")
    answer, trace = execute_multihop(
        corpus,
        state["query"],
        state["oracle"],
        plan=state["plan"],
        recorder=state["recorder"],
    )
    return {"answer": answer, "trace": trace}
