"""
Supervisor node - pre-execution cost and accuracy review of the plan
"""

import logging

from app.planner import estimate_accuracy, estimate_cost
from app.runtime.prompts import detection_overhead, leaf_overhead
from app.state import RunState

logger = logging.getLogger(__name__)


def estimate_node(state: RunState) -> RunState:
    """
    Predict cost, call count and an accuracy lower bound before any leaf
    call is made. An infeasible plan is reported, never rejected.
    """
    plan = state["plan"]
    profile = state["profile"]
    config = state["config"]
    n = len(state["doc"])
    overhead = leaf_overhead(plan.task, state.get("query"))

    estimate = estimate_cost(
        plan,
        n,
        profile,
        overhead=overhead,
        detection_overhead=detection_overhead(),
        neural_compose=config.neural_compose,
    )
    accuracy = estimate_accuracy(plan, n, profile, overhead=overhead)
    logger.info(
        f"estimate: Ĉ=${estimate.total:.4f} N̂={estimate.predicted_calls} "
        f"accuracy ≥ {accuracy:.4f}"
    )
    if plan.infeasible:
        logger.warning(f"estimate: plan cannot guarantee accuracy {plan.alpha}, running anyway")
    return {"estimate": estimate, "predicted_accuracy": accuracy}
