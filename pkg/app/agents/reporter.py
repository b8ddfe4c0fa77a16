"""
Reporter node - scoring against ground truth and the run summary
"""

import logging

from app.state import RunState
from app.taskgen import score_instance

logger = logging.getLogger(__name__)


def score_node(state: RunState) -> RunState:
    """
    Score the answer against the instance's ground truth.

    The score is None when the answer's task differs from the instance's
    (a misdetection), since the metric would compare unrelated shapes.
    """
    instance = state["instance"]
    trace = state["trace"]
    task = state["plan"].task
    if task != instance.task:
        logger.warning(f"score: detected {task.value}, instance is {instance.task.value}")
        score = None
    else:
        score = score_instance(instance, state["answer"])
    logger.info(
        f"run: {trace.oracle_calls} call(s), ${trace.accumulated_cost:.4f}, "
        f"score={score if score is None else round(score, 4)}"
    )
    return {"score": score}
